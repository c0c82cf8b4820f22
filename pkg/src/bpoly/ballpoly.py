"""Basic r-ball polyhedra: admissibility, face lattice, vertices and angles.

A center set ``C`` and radius ``r`` define ``P = ∩ B[c_i, r]``. The faces of
``P`` are read off the boundary part of the farthest-point Delaunay complex of
``C`` with the dimension flip ``(k-1)-face <-> (d-k)-cell``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import itertools
import math
from typing import NamedTuple

import numpy as np

from .errors import (
    AngleOutOfRange,
    DegeneratePair,
    EmptyIntersection,
    GeometryError,
    InvalidParameters,
    NonMonotoneBracket,
    NotBasic,
    RadiusTooSmall,
)
from .fvoronoi import (
    BoundaryDelaunayComplex,
    FarthestDelaunayComplex,
    boundary_delaunay,
    farthest_delaunay,
    voronoi_vertices,
)
from .geomcore import (
    DEFAULT_TOL,
    Tolerance,
    as_points,
    check_distinct,
    circumsphere,
    min_enclosing_ball,
)
from .hull import PolytopeComplex, convex_hull, supporting_facets_of

BISECTION_STEPS = 60
RADIUS_SLACK = 1e-6
MAX_BRACKET_DOUBLINGS = 30


# --------------------------------------------------------------------------
# ball-intersection maximizer


class _SubsetGroup(NamedTuple):
    index: np.ndarray  # (m, k) center indices
    center: np.ndarray  # (m, d) circumcenter of the subset
    rho: np.ndarray  # (m,) circumradius of the subset
    normal_space: np.ndarray  # (m, d-k+1, d) orthonormal directions of the sphere's flat


class BallIntersectionMaximizer:
    """Farthest point of ``∩ B[c, r]`` from a query, for any ``r``.

    The maximum of a distance over an intersection of balls is attained on
    some intersection sphere ``∩_{t in T} S(t, r)`` with ``|T| <= d``; on that
    sphere the critical points of the distance are the two points along the
    projected query direction. The r-independent geometry of every subset
    ``T`` (circumcenter, circumradius, flat of the sphere) is precomputed once.
    """

    def __init__(self, centers, tol: float = DEFAULT_TOL):
        self.centers = as_points(centers)
        n, d = self.centers.shape
        self.tolerance = Tolerance.for_points(self.centers, tol)
        eps = self.tolerance.eps
        self.groups: list[_SubsetGroup] = []
        for k in range(1, min(n, d) + 1):
            idx, cen, rho, nsp = [], [], [], []
            for T in itertools.combinations(range(n), k):
                pts = self.centers[list(T)]
                if k == 1:
                    cen.append(pts[0])
                    rho.append(0.0)
                    nsp.append(np.eye(d))
                    idx.append(T)
                    continue
                _, sv, vt = np.linalg.svd(pts[1:] - pts[0])
                if np.sum(sv > eps) < k - 1:
                    continue
                c, _ = circumsphere(pts, tol)
                idx.append(T)
                cen.append(c)
                rho.append(float(np.max(np.linalg.norm(pts - c, axis=1))))
                nsp.append(vt[k - 1 :])
            if idx:
                self.groups.append(
                    _SubsetGroup(np.array(idx), np.array(cen), np.array(rho), np.array(nsp))
                )

    def candidates(self, r: float, q, exclude: int | None = None) -> np.ndarray:
        q = np.asarray(q, float)
        eps = self.tolerance.eps
        out = []
        for g in self.groups:
            keep = g.rho <= r
            if exclude is not None:
                keep &= ~np.any(g.index == exclude, axis=1)
            if not np.any(keep):
                continue
            m, rho, F = g.center[keep], g.rho[keep], g.normal_space[keep]
            s = np.sqrt(np.maximum(r * r - rho * rho, 0.0))
            w = q - m
            coef = np.einsum("mjd,md->mj", F, w)
            w_perp = np.einsum("mj,mjd->md", coef, F)
            norm = np.linalg.norm(w_perp, axis=1)
            # tie: q projects onto the sphere center, every sphere point is
            # equidistant from q; use the sphere's extreme points along its flat
            tie = norm <= eps
            direction = np.where(
                tie[:, None], F[:, 0, :], w_perp / np.where(tie, 1.0, norm)[:, None]
            )
            out.append(m + s[:, None] * direction)
            out.append(m - s[:, None] * direction)
        if not out:
            return np.zeros((0, self.centers.shape[1]))
        return np.vstack(out)

    def maximize(self, r: float, q, exclude: int | None = None):
        """Return ``(x, ||q - x||)`` maximizing the distance over the intersection."""
        cand = self.candidates(r, q, exclude)
        eps = self.tolerance.eps
        dist = np.linalg.norm(cand[:, None, :] - self.centers[None, :, :], axis=2)
        if exclude is not None:
            dist[:, exclude] = 0.0
        feasible = np.all(dist <= r + eps, axis=1)
        if not np.any(feasible):
            raise EmptyIntersection(f"the radius-{r} balls have empty intersection")
        cand = cand[feasible]
        qd = np.linalg.norm(cand - np.asarray(q, float), axis=1)
        j = int(np.argmax(qd))
        return cand[j], float(qd[j])


def farthest_point_in_ball_intersection(centers, r: float, q, tol: float = DEFAULT_TOL):
    """Point of ``∩ B[c, r]`` farthest from ``q`` and its distance.

    ``q`` belongs to the r-convex hull of ``centers`` iff the distance is at
    most ``r``.
    """
    centers = as_points(centers)
    meb = min_enclosing_ball(centers, tol)
    if meb.radius > r + Tolerance.for_points(centers, tol).eps:
        raise EmptyIntersection(f"enclosing radius {meb.radius:.6g} exceeds r={r}")
    return BallIntersectionMaximizer(centers, tol).maximize(r, q)


# --------------------------------------------------------------------------
# center polytope


class _Geometry:
    """Radius-independent data of a center set, shared between radii."""

    def __init__(self, points: np.ndarray, tol: float):
        self.points = points
        self.tol = tol

    @cached_property
    def hull(self) -> PolytopeComplex:
        return convex_hull(self.points, self.points.shape[1], self.tol)

    @cached_property
    def delaunay(self) -> FarthestDelaunayComplex:
        return farthest_delaunay(self.points, self.tol, hull=self.hull)

    @cached_property
    def boundary(self) -> BoundaryDelaunayComplex:
        return boundary_delaunay(self.delaunay, self.hull)

    @cached_property
    def meb(self):
        return min_enclosing_ball(self.points, self.tol)

    @cached_property
    def maximizer(self) -> BallIntersectionMaximizer:
        return BallIntersectionMaximizer(self.points, self.tol)

    @cached_property
    def worst_circumradius(self) -> float:
        return max(v.circumradius for v in voronoi_vertices(self.delaunay))


@dataclass(frozen=True, eq=False)
class CenterPolytope:
    """Labeled center set ``C`` with generating radius ``r``."""

    points: np.ndarray
    r: float
    labels: tuple = ()
    tol: float = DEFAULT_TOL
    _geometry: _Geometry = field(default=None, repr=False)

    def __post_init__(self):
        pts = as_points(self.points)
        n, d = pts.shape
        if d < 2:
            raise InvalidParameters("dimension must be at least 2")
        if n < d + 1:
            raise InvalidParameters(f"need n >= d+1 = {d + 1} centers, got {n}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise InvalidParameters("r must be a positive finite number")
        check_distinct(pts, Tolerance.for_points(pts, self.tol).eps)
        labels = tuple(str(x) for x in self.labels) or tuple(f"c{i + 1}" for i in range(n))
        if len(labels) != n or len(set(labels)) != n:
            raise InvalidParameters("labels must be unique, one per point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "labels", labels)
        if self._geometry is None:
            object.__setattr__(self, "_geometry", _Geometry(pts, self.tol))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance.for_points(self.points, self.tol)

    @property
    def hull(self) -> PolytopeComplex:
        return self._geometry.hull

    @property
    def delaunay(self) -> FarthestDelaunayComplex:
        return self._geometry.delaunay

    @property
    def boundary(self) -> BoundaryDelaunayComplex:
        return self._geometry.boundary

    def with_radius(self, r: float) -> "CenterPolytope":
        return CenterPolytope(self.points, r, self.labels, self.tol, self._geometry)


# --------------------------------------------------------------------------
# admissibility


class RConvexity(NamedTuple):
    ok: bool
    witness: int | None
    margin: float
    indeterminate: bool


def _r_convexity(geo: _Geometry, r: float, eps: float) -> RConvexity:
    margin = r - geo.meb.radius
    witness = None
    if margin > eps:
        for i, c in enumerate(geo.points):
            _, dist = geo.maximizer.maximize(r, c, exclude=i)
            if dist - r < margin:
                margin, witness = dist - r, i
    return RConvexity(margin > eps, None if margin > eps else witness, margin, abs(margin) <= eps)


def is_r_convex_position(C: CenterPolytope) -> RConvexity:
    """Whether ``C`` lies in r-convex position, with the worst index as witness.

    Holds iff ``C`` fits in an open ball of radius ``r`` and no ``c_i`` lies in
    the r-convex hull of the others, i.e. the balls form a reduced family.
    Within tolerance of the boundary the result is marked indeterminate and
    counted as not certified.
    """
    return _r_convexity(C._geometry, C.r, C.tolerance.eps)


@dataclass(frozen=True)
class ValidationReport:
    hull_vertices_ok: bool
    r_convex_position_ok: bool
    r_convex_witness: int | None
    voronoi_vertices_interior_ok: bool
    worst_circumradius: float
    indeterminate: tuple = ()

    @property
    def is_basic(self) -> bool:
        return self.hull_vertices_ok and self.r_convex_position_ok and self.voronoi_vertices_interior_ok

    def as_dict(self) -> dict:
        return {
            "hull_vertices_ok": self.hull_vertices_ok,
            "r_convex_position_ok": self.r_convex_position_ok,
            "r_convex_witness": self.r_convex_witness,
            "voronoi_vertices_interior_ok": self.voronoi_vertices_interior_ok,
            "worst_circumradius": self.worst_circumradius,
            "indeterminate": list(self.indeterminate),
            "is_basic": self.is_basic,
        }


def validate_basic(C: CenterPolytope) -> ValidationReport:
    eps = C.tolerance.eps
    indeterminate = []
    hull_ok = not C.hull.nonvertex_indices
    rc = is_r_convex_position(C)
    if rc.indeterminate:
        indeterminate.append("r_convex_position")
    worst = C._geometry.worst_circumradius
    gap = C.r - worst
    if abs(gap) <= eps:
        indeterminate.append("voronoi_vertices_interior")
    return ValidationReport(
        hull_vertices_ok=hull_ok,
        r_convex_position_ok=rc.ok,
        r_convex_witness=rc.witness,
        voronoi_vertices_interior_ok=gap > eps,
        worst_circumradius=worst,
        indeterminate=tuple(indeterminate),
    )


class MinRadius(NamedTuple):
    radius: float
    binding: str  # "voronoi" or "r_convex"


def min_basic_radius(points, tol: float = DEFAULT_TOL) -> MinRadius:
    """Infimum of the radii making ``points`` a basic r-ball polyhedron.

    ``r*`` is the larger of the worst farthest-point Voronoi circumradius and
    the r-convex-position threshold (found by bisection on
    ``[worst circumradius, 4 * diameter]``, with the upper end doubled until
    the test holds there).
    """
    C = CenterPolytope(points, 1.0, tol=tol)
    geo = C._geometry
    if C.hull.nonvertex_indices:
        raise GeometryError(f"points {list(C.hull.nonvertex_indices)} are not hull vertices")
    eps = C.tolerance.eps
    worst = geo.worst_circumradius
    # near-cospherical sets can have a Voronoi vertex beyond the default bracket
    hi = max(4.0 * C.tolerance.relative_scale, 2.0 * worst)

    def holds(r):
        return _r_convexity(geo, r, eps).ok

    top = hi
    if holds(worst):
        r_star, binding = worst, "voronoi"
    else:
        for _ in range(MAX_BRACKET_DOUBLINGS):
            if holds(hi):
                break
            hi *= 2.0
        else:
            raise NonMonotoneBracket(f"r-convex position fails up to r={hi:.6g}")
        top, lo = hi, worst
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if holds(mid):
                hi = mid
            else:
                lo = mid
        r_star, binding = hi, "r_convex"
    for r in np.geomspace(r_star * (1 + RADIUS_SLACK), max(top, r_star * 2), 6):
        if not holds(r):
            raise NonMonotoneBracket(f"r-convex position fails at r={r:.6g} above threshold {r_star:.6g}")
    return MinRadius(float(r_star), binding)


# --------------------------------------------------------------------------
# face lattice


@dataclass(frozen=True)
class BallPolyFaceLattice:
    """Faces of ``P`` keyed by their defining center subsets.

    ``faces[k]`` holds the k-faces, each as the sorted index tuple ``S`` of
    the generating spheres containing it. A face lies below another iff its
    ``S`` is a superset. The empty face and ``P`` itself are implicit.
    """

    dim: int
    labels: tuple
    faces: tuple

    @property
    def f_vector(self) -> tuple:
        return tuple(len(fk) for fk in self.faces)

    @property
    def facets(self) -> tuple:
        return self.faces[self.dim - 1]

    @cached_property
    def _grade(self) -> dict:
        return {S: k for k, fk in enumerate(self.faces) for S in fk}

    def grade(self, S) -> int:
        return self._grade[tuple(S)]

    def leq(self, a, b) -> bool:
        return set(a) >= set(b)

    def meet(self, a, b):
        """Largest face below both, or ``None`` for the empty face."""
        need = set(a) | set(b)
        below = [S for S in self._grade if need <= set(S)]
        if not below:
            return None
        top = max(self._grade[S] for S in below)
        best = [S for S in below if self._grade[S] == top]
        if len(best) != 1:
            raise GeometryError(f"faces {a} and {b} have no unique meet")
        return best[0]

    def join(self, a, b):
        """Smallest face above both, or ``None`` for ``P`` itself."""
        need = set(a) & set(b)
        above = [S for S in self._grade if set(S) <= need]
        if not above:
            return None
        low = min(self._grade[S] for S in above)
        best = [S for S in above if self._grade[S] == low]
        if len(best) != 1:
            raise GeometryError(f"faces {a} and {b} have no unique join")
        return best[0]

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "f_vector": list(self.f_vector),
            "faces": [
                [[self.labels[i] for i in S] for S in fk] for fk in self.faces
            ],
        }


def build_face_lattice(C: CenterPolytope, report: ValidationReport | None = None) -> BallPolyFaceLattice:
    report = report or validate_basic(C)
    if not report.is_basic:
        raise NotBasic("center set and radius do not define a basic r-ball polyhedron", report)
    d = C.dim
    cells = C.boundary.cells
    faces = tuple(tuple(cells[d - 1 - k]) for k in range(d))
    return BallPolyFaceLattice(dim=d, labels=C.labels, faces=faces)


def realize_vertex(cell_points, normal, r: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vertex of ``P`` dual to a (d-1)-dimensional boundary cell.

    The cell's circumcenter is pushed inward (against the outward facet
    normal) until it is at distance ``r`` from the cell's centers.
    """
    pts = as_points(cell_points)
    center, rho = circumsphere(pts, tol)
    if rho >= r:
        raise RadiusTooSmall(f"cell circumradius {rho:.6g} >= r={r}")
    u = np.asarray(normal, float)
    u = u / np.linalg.norm(u)
    return center - math.sqrt(r * r - rho * rho) * u


def realize_vertices(C: CenterPolytope) -> dict:
    """Map each 0-face ``S`` of ``P`` to its coordinates."""
    out = {}
    for S in C.boundary.cells[C.dim - 1]:
        j = supporting_facets_of(C.hull, S)[0]
        out[S] = realize_vertex(C.points[list(S)], C.hull.facet_supports[j].normal, C.r, C.tol)
    return out


# --------------------------------------------------------------------------
# dihedral angles and Euler-Poincaré


@dataclass(frozen=True)
class DihedralAngle:
    pair: tuple
    theta: float


def angle_from_distance(w: float, r: float, tol: float = DEFAULT_TOL) -> float:
    eps = tol * r
    if w <= eps or w >= 2 * r - eps:
        raise DegeneratePair(f"center distance {w:.6g} outside (0, 2r) for r={r}")
    # pi - arccos(1 - w^2 / 2r^2), written with arcsin to stay accurate for small w
    return math.pi - 2.0 * math.asin(w / (2.0 * r))


def dihedral_angle(c_i, c_j, r: float, pair: tuple = (), tol: float = DEFAULT_TOL) -> DihedralAngle:
    """Inner dihedral angle along the face shared by the spheres at c_i, c_j."""
    w = float(np.linalg.norm(np.asarray(c_i, float) - np.asarray(c_j, float)))
    return DihedralAngle(tuple(pair), angle_from_distance(w, r, tol))


def edge_length_from_angle(theta: float, r: float) -> float:
    if not 0 < theta <= math.pi:
        raise AngleOutOfRange(f"theta={theta} outside (0, pi]")
    return 2.0 * r * math.cos(theta / 2.0)


def dihedral_angles(C: CenterPolytope) -> list[DihedralAngle]:
    """Angles of all (d-2)-faces of ``P``, keyed by their center pairs."""
    out = []
    for S in C.boundary.cells[1]:
        i, j = S
        out.append(dihedral_angle(C.points[i], C.points[j], C.r, pair=S, tol=C.tol))
    return out


def euler_sum(f) -> int:
    return sum((-1) ** i * int(x) for i, x in enumerate(f))


def euler_check(f, d: int) -> bool:
    if len(f) != d:
        return False
    return euler_sum(f) == 1 + (-1) ** (d + 1)
