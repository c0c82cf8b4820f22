"""Dimension-generic vector helpers, circumspheres, flats and enclosing balls.

Every geometric predicate in the package goes through :class:`Tolerance`,
which scales an absolute ``tol`` by the bounding-box diameter of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr, solve_triangular

from .errors import AffinelyDependent, DuplicatePoints, EmptyInput, GeometryError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Single comparison policy: ``eps = tol * relative_scale``."""

    tol: float = DEFAULT_TOL
    relative_scale: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    @property
    def eps(self) -> float:
        return self.tol * self.relative_scale

    @classmethod
    def for_points(cls, points, tol: float = DEFAULT_TOL) -> "Tolerance":
        scale = bbox_diameter(points)
        return cls(tol=tol, relative_scale=scale if scale > 0 else 1.0)


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, p, eps: float = 0.0) -> bool:
        return bool(np.linalg.norm(np.asarray(p, float) - self.center) <= self.radius + eps)


@dataclass(frozen=True)
class Flat:
    """Affine flat ``base + span(basis)``; ``basis`` rows are orthonormal."""

    base: np.ndarray
    basis: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def __post_init__(self):
        base = np.asarray(self.base, float)
        basis = np.asarray(self.basis, float).reshape(-1, base.shape[0])
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def as_points(points, dim: int | None = None) -> np.ndarray:
    """Return ``points`` as a finite float array of shape (n, d)."""
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise EmptyInput("expected a nonempty list of points")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("coordinates must be finite")
    if dim is not None and arr.shape[1] != dim:
        raise GeometryError(f"expected points of dimension {dim}, got {arr.shape[1]}")
    return arr


def bbox_diameter(points) -> float:
    arr = np.asarray(points, float)
    if arr.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(arr.max(axis=0) - arr.min(axis=0)))


def check_distinct(points, eps: float) -> None:
    """Raise :class:`DuplicatePoints` if two points coincide within ``eps``."""
    arr = np.asarray(points, float)
    if len(arr) < 2:
        return
    diff = np.linalg.norm(arr[:, None, :] - arr[None, :, :], axis=-1)
    iu = np.triu_indices(len(arr), k=1)
    close = diff[iu] <= eps
    if np.any(close):
        k = int(np.argmax(close))
        raise DuplicatePoints(f"points {iu[0][k]} and {iu[1][k]} coincide")


def affine_rank(points, eps: float) -> int:
    arr = np.asarray(points, float)
    if len(arr) <= 1:
        return 0
    sv = np.linalg.svd(arr[1:] - arr[0], compute_uv=False)
    return int(np.sum(sv > eps))


def affine_hull(points, eps: float) -> Flat:
    """Orthonormal description of ``aff(points)``."""
    arr = np.asarray(points, float)
    base = arr[0]
    if len(arr) == 1:
        return Flat(base, np.zeros((0, arr.shape[1])))
    _, sv, vt = np.linalg.svd(arr[1:] - base)
    k = int(np.sum(sv > eps))
    return Flat(base, vt[:k])


def project_to_flat(p, flat: Flat) -> np.ndarray:
    p = np.asarray(p, float)
    if flat.dim == 0:
        return flat.base.copy()
    B = flat.basis
    return flat.base + B.T @ (B @ (p - flat.base))


def _circumsphere(points, eps: float, strict: bool):
    arr = np.asarray(points, float)
    p0 = arr[0]
    if len(arr) == 1:
        return p0.copy(), 0.0
    V = (arr[1:] - p0).T  # d x m
    Q, R, piv = qr(V, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    k = int(np.sum(diag > eps))
    m = V.shape[1]
    if strict and k < m:
        raise AffinelyDependent(f"rank {k} < {m}: points are affinely dependent")
    if k == 0:
        raise AffinelyDependent("all points coincide")
    b = np.sum(V * V, axis=0)
    if k == m:
        # V = Q R P^T, so the equations 2 V^T Q y = b become R^T y = P^T b / 2
        y = solve_triangular(R, b[piv] / 2.0, trans="T")
    else:
        A = 2.0 * (V.T @ Q[:, :k])
        y, *_ = np.linalg.lstsq(A, b, rcond=None)
        Q = Q[:, :k]
    center = p0 + Q @ y
    return center, float(np.linalg.norm(center - p0))


def circumcenter(points, tol: float = DEFAULT_TOL):
    """Center and radius of the sphere through affinely independent ``points``.

    The center lies in the affine hull of the points.
    """
    arr = as_points(points)
    eps = Tolerance.for_points(arr, tol).eps
    return _circumsphere(arr, eps, strict=True)


def circumsphere(points, tol: float = DEFAULT_TOL):
    """Like :func:`circumcenter` but accepts cospherical dependent sets.

    The center is the least-squares equidistant point inside ``aff(points)``;
    the returned radius is the largest distance to an input point.
    """
    arr = as_points(points)
    eps = Tolerance.for_points(arr, tol).eps
    center, _ = _circumsphere(arr, eps, strict=False)
    return center, float(np.max(np.linalg.norm(arr - center, axis=1)))


def _ball_through(boundary: list, eps: float) -> tuple[np.ndarray, float]:
    center, _ = _circumsphere(np.array(boundary), eps, strict=False)
    radius = max(float(np.linalg.norm(center - b)) for b in boundary)
    return center, radius


def min_enclosing_ball(points, tol: float = DEFAULT_TOL) -> Ball:
    """Smallest enclosing ball by Welzl's randomized recursion.

    The processing order comes from a fixed seed, so the result is a
    deterministic function of the input.
    """
    if points is None or len(points) == 0:
        raise EmptyInput("min_enclosing_ball needs at least one point")
    arr = as_points(points)
    n, d = arr.shape
    eps = Tolerance.for_points(arr, tol).eps
    order = np.random.default_rng(0).permutation(n)
    pts = [arr[i] for i in order]

    def welzl(k: int, boundary: list) -> tuple[np.ndarray, float]:
        if k == 0 or len(boundary) == d + 1:
            if not boundary:
                return pts[0].copy(), 0.0
            return _ball_through(boundary, eps)
        p = pts[k - 1]
        center, radius = welzl(k - 1, boundary)
        if np.linalg.norm(p - center) <= radius + eps:
            return center, radius
        return welzl(k - 1, boundary + [p])

    center, radius = welzl(n, [])
    radius = max(radius, float(np.max(np.linalg.norm(arr - center, axis=1))))
    return Ball(center, radius)

