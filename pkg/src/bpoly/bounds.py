"""Cyclic polytopes: moment-curve points, Gale evenness and face numbers."""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import NamedTuple

import numpy as np

from .errors import FacetCountMismatch, InvalidParameters, NonDistinctTaus


@dataclass(frozen=True)
class CyclicFaceNumbers:
    n: int
    d: int
    c: tuple  # c[i] = number of i-faces of C(n, d)


def default_taus(n: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n)


def moment_curve_points(n: int, d: int, taus=None) -> np.ndarray:
    taus = default_taus(n) if taus is None else np.asarray(taus, float)
    if len(taus) != n:
        raise InvalidParameters(f"expected {n} tau values, got {len(taus)}")
    if n < d + 1:
        raise InvalidParameters(f"need n >= d+1, got n={n}, d={d}")
    if np.any(np.diff(taus) <= 0):
        if len(set(taus.tolist())) != n:
            raise NonDistinctTaus("tau values must be distinct")
        raise NonDistinctTaus("tau values must be strictly increasing")
    return np.stack([taus**k for k in range(1, d + 1)], axis=1)


def _check(n: int, d: int):
    if not (isinstance(n, (int, np.integer)) and isinstance(d, (int, np.integer))):
        raise InvalidParameters("n and d must be integers")
    if not n > d >= 2:
        raise InvalidParameters(f"need n > d >= 2, got n={n}, d={d}")


def is_gale_even(S, n: int) -> bool:
    """Every pair of non-members is separated by an even number of members."""
    members = set(S)
    outside = [j for j in range(n) if j not in members]
    for a, b in zip(outside, outside[1:]):
        if (b - a - 1) % 2:
            return False
    return True


def gale_evenness_facets(n: int, d: int) -> list[tuple]:
    """Facets of the cyclic polytope C(n, d) as 0-based index d-subsets."""
    _check(n, d)
    return [S for S in itertools.combinations(range(n), d) if is_gale_even(S, n)]


def cyclic_face_numbers(n: int, d: int) -> CyclicFaceNumbers:
    facets = gale_evenness_facets(n, d)
    c = []
    for i in range(d):
        faces = set()
        for F in facets:
            faces.update(itertools.combinations(F, i + 1))
        c.append(len(faces))
    return CyclicFaceNumbers(n, d, tuple(c))


class UBTResult(NamedTuple):
    holds: bool
    margins: tuple  # margins[k-1] = c_{d-k}(n, d) - f_{k-1}


def ubt_check(f, n: int, d: int) -> UBTResult:
    """Compare the f-vector of a basic ball polyhedron with the cyclic bound."""
    f = tuple(int(x) for x in f)
    if len(f) != d:
        raise InvalidParameters(f"f-vector must have {d} entries")
    if f[d - 1] != n:
        raise FacetCountMismatch(f"f_(d-1)={f[d - 1]} but n={n}")
    c = cyclic_face_numbers(n, d).c
    margins = tuple(c[d - k] - f[k - 1] for k in range(1, d + 1))
    return UBTResult(all(m >= 0 for m in margins), margins)
