import itertools

import numpy as np
import pytest

from bpoly.bounds import (
    cyclic_face_numbers,
    default_taus,
    gale_evenness_facets,
    is_gale_even,
    moment_curve_points,
    ubt_check,
)
from bpoly.errors import FacetCountMismatch, InvalidParameters, NonDistinctTaus
from bpoly.hull import convex_hull
from oracles import gale_facets_bruteforce


def test_moment_points():
    assert np.allclose(moment_curve_points(3, 2, [0, 1, 2]), [[0, 0], [1, 1], [2, 4]])
    assert [3, 9, 27] in moment_curve_points(4, 3, [0, 1, 2, 3]).tolist()
    with pytest.raises(NonDistinctTaus):
        moment_curve_points(4, 3, [0, 1, 1, 2])
    with pytest.raises(InvalidParameters):
        moment_curve_points(3, 3)


def test_default_taus():
    assert np.allclose(default_taus(5), [-1, -0.5, 0, 0.5, 1])
    assert np.allclose(moment_curve_points(5, 2)[:, 0], default_taus(5))


def test_gale_examples():
    assert len(gale_evenness_facets(6, 3)) == 8
    assert len(gale_evenness_facets(5, 4)) == 5
    assert len(gale_evenness_facets(7, 4)) == 14
    assert is_gale_even((0, 1, 2), 5)
    assert not is_gale_even((0, 2, 4), 5)
    with pytest.raises(InvalidParameters):
        gale_evenness_facets(3, 3)
    with pytest.raises(InvalidParameters):
        gale_evenness_facets(5, 1)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gale_matches_bruteforce(d):
    for n in range(d + 1, 10):
        assert sorted(gale_evenness_facets(n, d)) == sorted(gale_facets_bruteforce(n, d))


def test_face_numbers_examples():
    assert cyclic_face_numbers(4, 3).c == (4, 6, 4)
    assert cyclic_face_numbers(6, 3).c == (6, 12, 8)
    c = cyclic_face_numbers(7, 4).c
    assert c == (7, 21, 28, 14)
    # independent recount: distinct (i+1)-subsets of the brute-force facets
    facets = gale_facets_bruteforce(7, 4)
    for i in range(4):
        subsets = {S for F in facets for S in itertools.combinations(F, i + 1)}
        assert len(subsets) == c[i]


@pytest.mark.parametrize("n", range(4, 12))
def test_d3_closed_forms(n):
    c = cyclic_face_numbers(n, 3).c
    assert c == (n, 3 * n - 6, 2 * n - 4)


@pytest.mark.parametrize("n,d", [(n, d) for d in range(2, 6) for n in range(d + 1, 10)])
def test_dehn_sommerville_sum(n, d):
    c = cyclic_face_numbers(n, d).c
    assert c[0] == n
    assert sum((-1) ** i * x for i, x in enumerate(c)) == 1 + (-1) ** (d - 1)


def test_ubt_examples():
    res = ubt_check((6, 12, 8), 8, 3)
    assert res.holds and res.margins == (6, 6, 0)
    res = ubt_check((8, 12, 6), 6, 3)
    assert res.holds and res.margins == (0, 0, 0)
    res = ubt_check((9, 12, 6), 6, 3)
    assert not res.holds and res.margins[0] < 0
    with pytest.raises(FacetCountMismatch):
        ubt_check((8, 12, 5), 6, 3)


def test_gale_matches_geometric_hull_sample():
    hull = convex_hull(moment_curve_points(8, 4))
    assert sorted(hull.facets) == sorted(gale_evenness_facets(8, 4))
