"""Exception hierarchy shared by all bpoly modules."""


class BpolyError(ValueError):
    """Base class for every error raised by bpoly."""


class GeometryError(BpolyError):
    """Input geometry violates a precondition of the requested operation."""


class AffinelyDependent(GeometryError):
    pass


class EmptyInput(GeometryError):
    pass


class DegenerateDimension(GeometryError):
    pass


class DuplicatePoints(GeometryError):
    pass


class DimensionOutOfRange(BpolyError):
    pass


class UnknownIndex(BpolyError):
    pass


class NotOnBoundary(GeometryError):
    pass


class EmptyIntersection(GeometryError):
    pass


class DegenerateDirection(GeometryError):
    pass


class NonMonotoneBracket(GeometryError):
    pass


class NotBasic(BpolyError):
    """The center set and radius do not define a basic r-ball polyhedron."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RadiusTooSmall(GeometryError):
    pass


class DegeneratePair(GeometryError):
    pass


class AngleOutOfRange(BpolyError):
    pass


class InvalidParameters(BpolyError):
    pass


class NonDistinctTaus(InvalidParameters):
    pass


class FacetCountMismatch(BpolyError):
    pass


class RankDeficient(GeometryError):
    pass


class NotInscribed(GeometryError):
    pass


class UnsupportedDimension(BpolyError):
    pass


class ParseError(BpolyError):
    pass
