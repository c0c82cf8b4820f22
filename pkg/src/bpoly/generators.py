"""Instance generators: moment curve, regular simplex, cube, random."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .ballpoly import min_basic_radius
from .bounds import moment_curve_points
from .errors import DegenerateDimension, InvalidParameters
from .hull import convex_hull
from .instance import Instance

RADIUS_FACTOR = 1.1
MAX_RANDOM_RADIUS = 10.0


def _admissible_radius(points) -> float:
    return RADIUS_FACTOR * min_basic_radius(points).radius


def regular_simplex(d: int, edge: float = 1.0) -> np.ndarray:
    """Vertices of a regular d-simplex with the given edge length, centered at 0."""
    E = np.eye(d + 1) * (edge / math.sqrt(2.0))
    E -= E.mean(axis=0)
    _, _, vt = np.linalg.svd(E)
    X = E @ vt[:d].T
    X[np.abs(X) < 1e-15] = 0.0
    return X


def unit_cube(d: int) -> np.ndarray:
    return np.array(list(itertools.product([0.0, 1.0], repeat=d)))


def random_hull_points(n: int, d: int, seed, margin: float = 0.02, max_tries: int = 10_000) -> np.ndarray:
    """n points in convex position, drawn by rejection sampling.

    Candidates are random directions scaled by a radius in [0.7, 1]. A candidate
    is kept only if every point stays a hull vertex; finished sets in which
    some point sits within ``margin`` of the hull of the others are redrawn.
    """
    if n < d + 1 or d < 2:
        raise InvalidParameters(f"need d >= 2 and n >= d+1, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pts: list[np.ndarray] = []
        stalls = 0
        while len(pts) < n and stalls < 200:
            v = rng.normal(size=d)
            p = v / np.linalg.norm(v) * rng.uniform(0.7, 1.0)
            if pts and np.min(np.linalg.norm(np.array(pts) - p, axis=1)) < 0.15:
                stalls += 1
                continue
            trial = np.array(pts + [p])
            if len(trial) >= d + 1:
                try:
                    if convex_hull(trial).nonvertex_indices:
                        stalls += 1
                        continue
                except DegenerateDimension:
                    stalls += 1
                    continue
            pts.append(p)
        if len(pts) == n and _depth(np.array(pts)) >= margin:
            return np.array(pts)
    raise InvalidParameters(f"could not draw {n} points in convex position in dimension {d}")


def _depth(points: np.ndarray) -> float:
    """Smallest distance by which a point sticks out of the hull of the others."""
    n, d = points.shape
    depth = math.inf
    for i in range(n):
        rest = np.delete(points, i, axis=0)
        if len(rest) < d + 1:
            return math.inf
        try:
            hull = convex_hull(rest)
        except DegenerateDimension:
            return math.inf
        out = max(s.signed_distance(points[i]) for s in hull.facet_supports)
        depth = min(depth, out)
    return depth


def generate(kind: str, n: int | None = None, d: int = 3, r: float | None = None, seed: int = 0) -> Instance:
    """Build an instance; ``r`` defaults to 1.1 times the minimal admissible radius."""
    if d < 2:
        raise InvalidParameters("d must be at least 2")
    if kind == "moment":
        n = d + 3 if n is None else n
        pts = moment_curve_points(n, d)
    elif kind == "simplex":
        pts = regular_simplex(d)
    elif kind == "cube":
        pts = unit_cube(d)
        r = 1.0 if r is None and d == 3 else r
    elif kind == "random":
        if n is None:
            raise InvalidParameters("random instances need --n")
        # near-cospherical draws push Voronoi vertices far out; redraw those
        rng = np.random.default_rng(seed)
        for _ in range(100):
            pts = random_hull_points(n, d, rng)
            r_min = min_basic_radius(pts).radius
            if r_min <= MAX_RANDOM_RADIUS:
                break
        else:
            raise InvalidParameters("could not draw a well-conditioned random instance")
        r = RADIUS_FACTOR * r_min if r is None else r
    else:
        raise InvalidParameters(f"unknown kind {kind!r}")
    if r is None:
        r = _admissible_radius(pts)
    if not r > 0:
        raise InvalidParameters("r must be positive")
    labels = tuple(f"c{i + 1}" for i in range(len(pts)))
    return Instance(d, float(r), np.asarray(pts, float), labels)
