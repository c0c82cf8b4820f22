"""Farthest-point Delaunay complex via the paraboloid lift.

The top cells are the projections of the upper-hull facets of the lifted
points (outward normal with positive last coordinate). When the lifted
points are affinely flat, i.e. the input is cospherical, the complex is the
face complex of ``conv(C)`` plus ``conv(C)`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateDimension, NotOnBoundary
from .geomcore import DEFAULT_TOL, Tolerance, affine_rank, as_points, check_distinct, circumsphere
from .hull import PolytopeComplex, convex_hull, supporting_facets_of


@dataclass(frozen=True)
class VoronoiVertex:
    location: np.ndarray
    farthest_set: tuple
    circumradius: float


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone with apex at the origin spanned by ``generators`` (rows)."""

    generators: np.ndarray

    @property
    def dim(self) -> int:
        if len(self.generators) == 0:
            return 0
        return int(np.linalg.matrix_rank(self.generators, tol=1e-9))

    def is_pointed(self) -> bool:
        """True iff the cone contains no line.

        A line exists iff some nonnegative, nonzero combination of the
        generators vanishes; that is decided by a small LP.
        """
        G = np.asarray(self.generators, float)
        m = len(G)
        if m == 0:
            return True
        res = linprog(
            -np.ones(m), A_eq=G.T, b_eq=np.zeros(G.shape[1]), bounds=[(0, 1)] * m, method="highs"
        )
        return bool(res.status == 0 and -res.fun <= 1e-9)


@dataclass(frozen=True)
class FarthestDelaunayComplex:
    """Cells ``conv(S)`` of the farthest-point Delaunay complex.

    ``cells[k]`` holds the k-dimensional cells as sorted index tuples,
    ``circumdata`` is aligned with ``cells[dim]`` and ``boundary_flags[k][j]``
    marks cells lying in a facet of ``conv(C)``.
    """

    dim: int
    points: np.ndarray
    cells: tuple
    circumdata: tuple
    poset: tuple
    boundary_flags: tuple
    cospherical: bool
    tolerance: Tolerance

    @property
    def top_cells(self) -> tuple:
        return self.cells[self.dim]

    def cell_counts(self) -> tuple:
        return tuple(len(ck) for ck in self.cells)


@dataclass(frozen=True)
class BoundaryDelaunayComplex:
    """Cells of the farthest-point Delaunay complex contained in ``bd conv(C)``."""

    dim: int
    cells: tuple  # per dimension 0..dim-1

    def cell_counts(self) -> tuple:
        return tuple(len(ck) for ck in self.cells)


def lift(points) -> np.ndarray:
    X = np.asarray(points, float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    return np.hstack([X, np.sum(X * X, axis=1, keepdims=True)])


def _poset(cells) -> tuple:
    poset = [tuple(() for _ in cells[0])]
    for k in range(1, len(cells)):
        lower = [frozenset(c) for c in cells[k - 1]]
        poset.append(
            tuple(tuple(j for j, g in enumerate(lower) if g <= frozenset(c)) for c in cells[k])
        )
    return tuple(poset)


def farthest_delaunay(points, tol: float = DEFAULT_TOL, hull: PolytopeComplex | None = None):
    """Build the farthest-point Delaunay complex of ``points``."""
    X0 = as_points(points)
    n, d = X0.shape
    tolerance = Tolerance.for_points(X0, tol)
    if n < d + 1:
        raise DegenerateDimension(f"need at least {d + 1} points in dimension {d}, got {n}")
    check_distinct(X0, tolerance.eps)
    if hull is None:
        hull = convex_hull(X0, d, tol)

    X = (X0 - X0.mean(axis=0)) / tolerance.relative_scale
    L = lift(X)
    cospherical = affine_rank(L, tol) < d + 1

    cells: list[set] = [set() for _ in range(d + 1)]
    if cospherical:
        for k in range(d):
            cells[k].update(hull.faces[k])
        cells[d].add(tuple(hull.vertex_indices))
    else:
        lifted = convex_hull(L, d + 1, tol)
        leps = lifted.tolerance.tol
        tops = [
            frozenset(f)
            for f, sup in zip(lifted.facets, lifted.facet_supports)
            if sup.normal[-1] > leps
        ]
        cells[d].update(tuple(sorted(t)) for t in tops)
        for k in range(d):
            for face in lifted.faces[k]:
                fs = frozenset(face)
                if any(fs <= t for t in tops):
                    cells[k].add(face)

    cells_t = tuple(tuple(sorted(ck)) for ck in cells)
    circumdata = tuple(circumsphere(X0[list(c)], tol) for c in cells_t[d])
    facets = [frozenset(f) for f in hull.facets]
    flags = tuple(
        tuple(any(frozenset(c) <= f for f in facets) for c in ck) for ck in cells_t
    )
    return FarthestDelaunayComplex(
        dim=d,
        points=X0,
        cells=cells_t,
        circumdata=circumdata,
        poset=_poset(cells_t),
        boundary_flags=flags,
        cospherical=cospherical,
        tolerance=tolerance,
    )


def boundary_delaunay(dc: FarthestDelaunayComplex, hull: PolytopeComplex) -> BoundaryDelaunayComplex:
    facets = [frozenset(f) for f in hull.facets]
    cells = tuple(
        tuple(c for c in dc.cells[k] if any(frozenset(c) <= f for f in facets))
        for k in range(dc.dim)
    )
    return BoundaryDelaunayComplex(dim=dc.dim, cells=cells)


def voronoi_vertices(dc: FarthestDelaunayComplex) -> list[VoronoiVertex]:
    return [
        VoronoiVertex(location=np.asarray(center), farthest_set=cell, circumradius=float(radius))
        for cell, (center, radius) in zip(dc.top_cells, dc.circumdata)
    ]


def recession_cone(hull: PolytopeComplex, S) -> Cone:
    """Negated normal cone of ``conv(C)`` at the smallest face containing S."""
    idx = supporting_facets_of(hull, S)
    if not idx:
        raise NotOnBoundary(f"{sorted(S)} lies in no facet of the hull")
    return Cone(np.array([-hull.facet_supports[j].normal for j in idx]))


def farthest_set(points, x, eps: float) -> frozenset:
    """``R_f(x)``: indices of the points at maximal distance from ``x``."""
    dist = np.linalg.norm(np.asarray(points, float) - np.asarray(x, float), axis=1)
    return frozenset(int(i) for i in np.flatnonzero(dist >= dist.max() - eps))
