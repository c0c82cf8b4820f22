"""Convex hulls in d dimensions with the full face lattice.

Qhull supplies candidate facet hyperplanes. Every input point lying on a
candidate hyperplane within tolerance is attached to it, so coplanar
simplices are merged into one (possibly non-simplicial) facet. Lower faces
are the nonempty intersections of facet vertex sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateDimension, DimensionOutOfRange, GeometryError, UnknownIndex
from .geomcore import DEFAULT_TOL, Tolerance, affine_rank, as_points, check_distinct

Face = tuple  # sorted tuple of point indices


@dataclass(frozen=True)
class HalfspaceSupport:
    """Facet inequality ``<normal, x> <= offset`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x, float) @ self.normal - self.offset


@dataclass(frozen=True)
class PolytopeComplex:
    """Graded face lattice of a full-dimensional convex polytope.

    ``faces[k]`` lists the k-faces as sorted tuples of input indices,
    ``incidence[k][j]`` gives the positions in ``faces[k-1]`` of the
    (k-1)-faces of ``faces[k][j]``, and ``facet_supports`` is aligned with
    ``faces[dim-1]``.
    """

    dim: int
    points: np.ndarray
    vertex_indices: tuple
    nonvertex_indices: tuple
    faces: tuple
    incidence: tuple
    facet_supports: tuple
    tolerance: Tolerance

    @property
    def facets(self) -> tuple:
        return self.faces[self.dim - 1]

    @property
    def f_vector(self) -> tuple:
        return tuple(len(fk) for fk in self.faces)


def _hyperplane_through(pts: np.ndarray, interior: np.ndarray):
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid)
    normal = vt[-1]
    offset = float(normal @ centroid)
    if normal @ interior > offset:
        normal, offset = -normal, -offset
    return normal, offset


def _qhull_planes(X: np.ndarray):
    d = X.shape[1]
    if d == 1:
        return [(np.array([1.0]), -X.max()), (np.array([-1.0]), X.min())]
    try:
        hull = ConvexHull(X)
    except QhullError as exc:  # pragma: no cover - rank is checked beforehand
        raise DegenerateDimension(str(exc)) from exc
    return [(eq[:-1], eq[-1]) for eq in hull.equations]


def _face_closure(facets: list[frozenset]) -> set[frozenset]:
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for a in frontier:
            for b in facets:
                c = a & b
                if c and c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    return faces


def convex_hull(points, d: int | None = None, tol: float = DEFAULT_TOL) -> PolytopeComplex:
    """Face lattice of ``conv(points)`` with coplanar facets merged.

    Points that are not extreme are listed in ``nonvertex_indices`` and never
    appear in any face.
    """
    X0 = as_points(points, d)
    n, dim = X0.shape
    tolerance = Tolerance.for_points(X0, tol)
    if n < dim + 1:
        raise DegenerateDimension(f"need at least {dim + 1} points in dimension {dim}, got {n}")
    check_distinct(X0, tolerance.eps)
    if affine_rank(X0, tolerance.eps) < dim:
        raise DegenerateDimension(f"points do not affinely span dimension {dim}")

    # work in coordinates with unit bounding-box diameter
    shift = X0.mean(axis=0)
    scale = tolerance.relative_scale
    X = (X0 - shift) / scale
    eps = tol
    interior = np.zeros(dim)

    facet_sets: dict[frozenset, tuple] = {}
    for normal, offset in _qhull_planes(X):
        norm = np.linalg.norm(normal)
        dist = (X @ normal + offset) / norm
        members = np.flatnonzero(np.abs(dist) <= max(eps, 1e-12))
        if len(members) < dim or affine_rank(X[members], eps) < dim - 1:
            continue
        nrm, off = _hyperplane_through(X[members], interior)
        members = np.flatnonzero(np.abs(X @ nrm - off) <= eps)
        key = frozenset(int(i) for i in members)
        if key not in facet_sets:
            facet_sets[key] = (nrm, off)

    for key, (nrm, off) in facet_sets.items():
        if np.max(X @ nrm - off) > eps:
            raise GeometryError("facet hyperplane separates input points; input too degenerate")

    # extreme points are those whose normal cone is full-dimensional
    is_vertex = np.zeros(n, bool)
    for i in range(n):
        normals = [facet_sets[k][0] for k in facet_sets if i in k]
        if normals and np.linalg.matrix_rank(np.array(normals), tol=1e-9) == dim:
            is_vertex[i] = True
    vertex_set = frozenset(int(i) for i in np.flatnonzero(is_vertex))

    facets: dict[Face, tuple] = {}
    for key, plane in facet_sets.items():
        fset = tuple(sorted(key & vertex_set))
        facets.setdefault(fset, plane)

    by_dim: list[list[Face]] = [[] for _ in range(dim)]
    for face in _face_closure([frozenset(f) for f in facets]):
        k = affine_rank(X[sorted(face)], eps)
        if k >= dim:
            raise GeometryError("face closure produced a full-dimensional set")
        by_dim[k].append(tuple(sorted(face)))
    faces = tuple(tuple(sorted(fk)) for fk in by_dim)
    if set(faces[dim - 1]) != set(facets):
        raise GeometryError("merged facets are not affinely (d-1)-dimensional")

    incidence = [tuple(() for _ in faces[0])]
    for k in range(1, dim):
        lower = [frozenset(f) for f in faces[k - 1]]
        incidence.append(
            tuple(
                tuple(j for j, g in enumerate(lower) if g <= frozenset(f))
                for f in faces[k]
            )
        )

    supports = []
    for f in faces[dim - 1]:
        nrm, off = facets[f]
        supports.append(HalfspaceSupport(nrm.copy(), float(off * scale + nrm @ shift)))

    return PolytopeComplex(
        dim=dim,
        points=X0,
        vertex_indices=tuple(sorted(vertex_set)),
        nonvertex_indices=tuple(int(i) for i in np.flatnonzero(~is_vertex)),
        faces=faces,
        incidence=tuple(incidence),
        facet_supports=tuple(supports),
        tolerance=tolerance,
    )


def faces_of_dim(c: PolytopeComplex, k: int) -> list:
    if not 0 <= k <= c.dim - 1:
        raise DimensionOutOfRange(f"k must lie in [0, {c.dim - 1}], got {k}")
    return list(c.faces[k])


def supporting_facets_of(c: PolytopeComplex, S) -> list[int]:
    """Positions (in ``c.facets``) of all facets whose vertex set contains S."""
    S = frozenset(int(i) for i in S)
    if not S:
        raise UnknownIndex("S must be nonempty")
    unknown = S - set(c.vertex_indices)
    if unknown:
        raise UnknownIndex(f"indices {sorted(unknown)} are not hull vertices")
    return [j for j, f in enumerate(c.facets) if S <= frozenset(f)]
