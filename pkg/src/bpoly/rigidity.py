"""Congruence checks for basic r-ball polyhedra with equal dihedral angles.

Two polyhedra are compared by searching face-lattice isomorphisms, comparing
the dihedral angles they pair up, and aligning the matched centers with an
orthogonal Procrustes fit.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Iterator

import numpy as np

from .ballpoly import (
    BallPolyFaceLattice,
    CenterPolytope,
    angle_from_distance,
    build_face_lattice,
    validate_basic,
)
from .errors import InvalidParameters, NotBasic, NotInscribed, RankDeficient
from .geomcore import DEFAULT_TOL, Tolerance, affine_hull, affine_rank, as_points, circumsphere
from .hull import convex_hull

DEFAULT_ANGLE_TOL = 1e-7


@dataclass(frozen=True)
class LatticeIsomorphism:
    """Bijection of facets (center indices) inducing a lattice isomorphism."""

    facet_map: tuple  # facet_map[i] = index in the second lattice

    def map_face(self, S) -> tuple:
        return tuple(sorted(self.facet_map[i] for i in S))


@dataclass(frozen=True)
class Isometry:
    linear: np.ndarray
    translation: np.ndarray
    residual: float

    @property
    def proper(self) -> bool:
        return bool(np.linalg.det(self.linear) > 0)

    def apply(self, points) -> np.ndarray:
        return np.asarray(points, float) @ self.linear.T + self.translation


@dataclass(frozen=True)
class RigidityVerdict:
    """Outcome of :func:`rigidity_compare`.

    ``kind`` is one of ``congruent``, ``lattice_mismatch``, ``angle_mismatch``,
    ``radius_mismatch`` or ``alignment_failure``. The last one would be a
    counterexample to global rigidity and is reported, never raised.
    """

    kind: str
    isometry: Isometry | None = None
    facet_map: tuple | None = None
    max_deviation: float | None = None
    witness: tuple | None = None

    @property
    def congruent(self) -> bool:
        return self.kind == "congruent"


def _signatures(L: BallPolyFaceLattice) -> list[tuple]:
    n = len(L.facets)
    sig = [[0] * L.dim for _ in range(n)]
    for k, fk in enumerate(L.faces):
        for S in fk:
            for i in S:
                sig[i][k] += 1
    return [tuple(s) for s in sig]


def lattice_isomorphisms(L1: BallPolyFaceLattice, L2: BallPolyFaceLattice) -> Iterator[LatticeIsomorphism]:
    """Yield every grade-preserving isomorphism, in lexicographic order of facet maps."""
    if L1.dim != L2.dim or L1.f_vector != L2.f_vector:
        return
    n = len(L1.facets)
    sig1, sig2 = _signatures(L1), _signatures(L2)
    candidates = [[j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)]
    if any(not c for c in candidates):
        return
    # faces checked as soon as their largest member is assigned
    closing: list[list[tuple]] = [[] for _ in range(n)]
    for k, fk in enumerate(L1.faces):
        for S in fk:
            closing[max(S)].append((k, S))
    targets = [set(fk) for fk in L2.faces]
    image = [-1] * n
    used = [False] * n

    def extend(i: int):
        if i == n:
            yield LatticeIsomorphism(tuple(image))
            return
        for j in candidates[i]:
            if used[j]:
                continue
            image[i] = j
            if all(tuple(sorted(image[a] for a in S)) in targets[k] for k, S in closing[i]):
                used[j] = True
                yield from extend(i + 1)
                used[j] = False
        image[i] = -1

    yield from extend(0)


def compare_dihedrals(P1: CenterPolytope, P2: CenterPolytope, iso: LatticeIsomorphism):
    """Largest angle difference over paired (d-2)-faces, with the worst pair."""
    worst, witness = 0.0, None
    for S in P1.boundary.cells[1]:
        i, j = S
        a, b = iso.facet_map[i], iso.facet_map[j]
        t1 = angle_from_distance(float(np.linalg.norm(P1.points[i] - P1.points[j])), P1.r, P1.tol)
        t2 = angle_from_distance(float(np.linalg.norm(P2.points[a] - P2.points[b])), P2.r, P2.tol)
        dev = abs(t1 - t2)
        if witness is None or dev > worst:
            worst, witness = dev, S
    return worst, witness


def best_isometry(src, dst, correspondence=None, tol: float = DEFAULT_TOL) -> Isometry:
    """Least-squares orthogonal map plus translation taking ``src`` onto ``dst``.

    Reflections are allowed. ``correspondence[i]`` is the index in ``dst``
    matched with ``src[i]`` (identity when omitted).
    """
    A = as_points(src)
    B = as_points(dst)
    if correspondence is not None:
        B = B[list(correspondence)]
    if A.shape != B.shape:
        raise InvalidParameters("src and dst must have the same shape")
    n, d = A.shape
    for X in (A, B):
        if n < d + 1 or affine_rank(X, Tolerance.for_points(X, tol).eps) < d:
            raise RankDeficient("point set does not affinely span its ambient space")
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    H = (A - ca).T @ (B - cb)
    U, _, Vt = np.linalg.svd(H)
    R = Vt.T @ U.T
    t = cb - R @ ca
    residual = float(np.sqrt(np.mean(np.sum((A @ R.T + t - B) ** 2, axis=1))))
    return Isometry(R, t, residual)


def _intrinsic(points: np.ndarray, eps: float) -> np.ndarray:
    flat = affine_hull(points, eps)
    return (points - flat.base) @ flat.basis.T


def _inscribed_faces(X: np.ndarray, eps: float):
    """Face list of the polytope with intrinsic coordinates X; checks cosphericity."""
    k = X.shape[1]
    if k == 0:
        return [(0,)]
    if k == 1:
        order = np.argsort(X[:, 0])
        return [tuple(sorted((int(order[0]), int(order[-1]))))]
    hull = convex_hull(X, k)
    faces = [f for fk in hull.faces for f in fk] + [tuple(hull.vertex_indices)]
    for f in faces:
        if len(f) < 3:
            continue
        center, radius = circumsphere(X[list(f)])
        spread = np.abs(np.linalg.norm(X[list(f)] - center, axis=1) - radius)
        if spread.max() > eps:
            raise NotInscribed(f"face {f} is not inscribed in a sphere")
    return faces


def inscribed_cell_congruence(Q, Q2, tol: float = DEFAULT_TOL) -> bool:
    """Congruence of two corresponded polytopes whose faces are all inscribed.

    Corresponding vertices share an index. Edge lengths are compared first,
    then an isometry is fitted in intrinsic coordinates.
    """
    A, B = as_points(Q), as_points(Q2)
    if len(A) != len(B):
        return False
    eps = tol * max(Tolerance.for_points(A).relative_scale, Tolerance.for_points(B).relative_scale)
    XA, XB = _intrinsic(A, eps), _intrinsic(B, eps)
    if XA.shape[1] != XB.shape[1]:
        return False
    fa, fb = _inscribed_faces(XA, eps), _inscribed_faces(XB, eps)
    if set(fa) != set(fb):
        return False
    for f in fa:
        if len(f) == 2:
            i, j = f
            if abs(np.linalg.norm(A[i] - A[j]) - np.linalg.norm(B[i] - B[j])) > eps:
                return False
    if XA.shape[1] == 0:
        return True
    return best_isometry(XA, XB, tol=tol).residual <= eps


def cyclic_polygon_from_sides(sides) -> np.ndarray:
    """Convex polygon inscribed in a circle with the given side lengths, in order.

    The circumradius is found by bisection; returns the vertices in the plane.
    """
    s = np.asarray(sides, float)
    if len(s) < 3 or np.any(s <= 0) or 2 * s.max() >= s.sum():
        raise InvalidParameters("side lengths do not form a polygon")
    big = int(np.argmax(s))

    def arcs(R):
        return 2.0 * np.arcsin(np.minimum(s / (2.0 * R), 1.0))

    lo = s.max() / 2.0
    center_inside = arcs(lo).sum() >= 2.0 * math.pi
    if center_inside:
        def excess(R):
            return arcs(R).sum() - 2.0 * math.pi
    else:
        def excess(R):
            a = arcs(R)
            return a[big] - np.delete(a, big).sum()
    hi = lo * 2.0
    while excess(hi) > 0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    R = 0.5 * (lo + hi)
    a = arcs(R)
    if not center_inside:
        a[big] = 2.0 * math.pi - a[big]
    angles = np.concatenate([[0.0], np.cumsum(a[:-1])])
    return R * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def rigidity_compare(
    P1: CenterPolytope,
    P2: CenterPolytope,
    angle_tol: float = DEFAULT_ANGLE_TOL,
) -> RigidityVerdict:
    """Decide whether two basic r-ball polyhedra are congruent.

    Isomorphisms are tried in lexicographic order; the first one whose
    dihedral angles agree and whose matched centers align is reported.
    """
    if P1.dim != P2.dim:
        raise InvalidParameters(f"dimension mismatch: {P1.dim} vs {P2.dim}")
    for P in (P1, P2):
        report = validate_basic(P)
        if not report.is_basic:
            raise NotBasic("input is not a basic r-ball polyhedron", report)
    if abs(P1.r - P2.r) > P1.tol * max(P1.r, P2.r):
        return RigidityVerdict("radius_mismatch", max_deviation=abs(P1.r - P2.r))
    L1, L2 = build_face_lattice(P1), build_face_lattice(P2)
    scale = max(P1.tolerance.relative_scale, P2.tolerance.relative_scale)
    best_dev, best_witness, matched = None, None, None
    found_any = False
    for iso in lattice_isomorphisms(L1, L2):
        found_any = True
        dev, witness = compare_dihedrals(P1, P2, iso)
        if dev > angle_tol:
            if best_dev is None or dev < best_dev:
                best_dev, best_witness = dev, witness
            continue
        g = best_isometry(P1.points, P2.points, iso.facet_map, tol=P1.tol)
        if g.residual <= P1.tol * scale:
            return RigidityVerdict("congruent", g, iso.facet_map, dev, None)
        if matched is None:
            matched = (iso, g, dev)
    if not found_any:
        return RigidityVerdict("lattice_mismatch")
    if matched is not None:
        iso, g, dev = matched
        return RigidityVerdict("alignment_failure", g, iso.facet_map, dev, None)
    return RigidityVerdict("angle_mismatch", max_deviation=best_dev, witness=best_witness)
