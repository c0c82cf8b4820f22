import math

import numpy as np
import pytest

from bpoly.ballpoly import CenterPolytope, build_face_lattice, min_basic_radius
from bpoly.errors import InvalidParameters, NotBasic, NotInscribed, RankDeficient
from bpoly.generators import random_hull_points
from bpoly.rigidity import (
    LatticeIsomorphism,
    best_isometry,
    compare_dihedrals,
    cyclic_polygon_from_sides,
    inscribed_cell_congruence,
    lattice_isomorphisms,
    rigidity_compare,
)
from conftest import random_rotation
from oracles import count_lattice_automorphisms


def transformed_copy(C, rng, proper=False):
    """Rotated (optionally reflected), translated and relabeled copy of C."""
    d = C.dim
    Q = random_rotation(d, rng, proper=True)
    if not proper:
        Q = Q @ np.diag([-1.0] + [1.0] * (d - 1))
    perm = rng.permutation(C.n)
    pts = (C.points @ Q.T + rng.normal(size=d) * 3)[perm]
    labels = [C.labels[i] for i in perm]
    return CenterPolytope(pts, C.r, labels), Q, perm


def test_cube_automorphisms(cube):
    L = build_face_lattice(CenterPolytope(cube, 1.0))
    isos = list(lattice_isomorphisms(L, L))
    assert len(isos) == 48
    assert isos[0].facet_map == tuple(range(8))
    assert len(isos) == count_lattice_automorphisms(L.faces, 8)
    assert [i.facet_map for i in isos] == sorted(i.facet_map for i in isos)


def test_cube_vs_tetra_has_no_isomorphism(cube, tetra):
    L1 = build_face_lattice(CenterPolytope(cube, 1.0))
    L2 = build_face_lattice(CenterPolytope(tetra, 1.0))
    assert list(lattice_isomorphisms(L1, L2)) == []


def test_relabeled_copy_isomorphic(moment_6_3):
    r = 1.1 * min_basic_radius(moment_6_3).radius
    C = CenterPolytope(moment_6_3, r)
    perm = np.array([3, 0, 5, 1, 4, 2])
    C2 = CenterPolytope(moment_6_3[perm], r)
    isos = list(lattice_isomorphisms(build_face_lattice(C), build_face_lattice(C2)))
    inverse = tuple(int(np.flatnonzero(perm == i)[0]) for i in range(6))
    assert inverse in [i.facet_map for i in isos]


def test_compare_dihedrals_examples(cube):
    C = CenterPolytope(cube, 1.0)
    ident = LatticeIsomorphism(tuple(range(8)))
    assert compare_dihedrals(C, C, ident)[0] == 0.0
    rng = np.random.default_rng(0)
    C2, _, perm = transformed_copy(C, rng, proper=True)
    inverse = tuple(int(np.flatnonzero(perm == i)[0]) for i in range(8))
    assert compare_dihedrals(C, C2, LatticeIsomorphism(inverse))[0] < 1e-10
    pts = cube.copy()
    pts[0] += [0.01, 0, 0]
    dev, witness = compare_dihedrals(C, CenterPolytope(pts, 1.0), ident)
    assert dev > 1e-4 and 0 in witness


def test_dihedral_deviation_same_across_symmetries(cube):
    C = CenterPolytope(cube, 1.0)
    L = build_face_lattice(C)
    devs = {round(compare_dihedrals(C, C, iso)[0], 14) for iso in lattice_isomorphisms(L, L)}
    assert devs == {0.0}


def test_best_isometry_cases(tetra):
    rng = np.random.default_rng(1)
    g = best_isometry(tetra, tetra)
    assert np.allclose(g.linear, np.eye(3)) and g.residual < 1e-12
    Q = random_rotation(3, rng)
    t = rng.normal(size=3)
    g = best_isometry(tetra, tetra @ Q.T + t)
    assert g.residual < 1e-9
    assert np.allclose(g.linear, Q) and np.allclose(g.translation, t)
    assert g.proper
    assert best_isometry(tetra, 2 * tetra).residual > 0.1
    Rf = np.diag([1.0, 1.0, -1.0])
    g = best_isometry(tetra, tetra @ Rf.T)
    assert g.residual < 1e-9 and not g.proper
    assert np.allclose(g.linear @ g.linear.T, np.eye(3), atol=1e-9)


def test_best_isometry_with_correspondence(tetra):
    perm = [2, 0, 3, 1]
    g = best_isometry(tetra, tetra[perm], correspondence=np.argsort(perm))
    assert g.residual < 1e-12


def test_best_isometry_rank_deficient():
    flat = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]
    with pytest.raises(RankDeficient):
        best_isometry(flat, flat)


def _regular_polygon(k, R=1.0, phase=0.0):
    t = phase + 2 * math.pi * np.arange(k) / k
    return R * np.stack([np.cos(t), np.sin(t)], axis=1)


def test_inscribed_pentagons():
    rng = np.random.default_rng(2)
    P = _regular_polygon(5)
    Q = random_rotation(2, rng)
    assert inscribed_cell_congruence(P, P @ Q.T + [3, -1])
    # same pentagon embedded in a plane of 3-space
    P3 = np.hstack([P, np.zeros((5, 1))]) @ random_rotation(3, rng).T
    assert inscribed_cell_congruence(P3, P @ Q.T)


def test_inscribed_rectangles():
    A = np.array([[0, 0], [1, 0], [1, 2], [0, 2]], float)
    B = np.array([[0, 1], [0, 0], [2, 0], [2, 1]], float)
    assert inscribed_cell_congruence(A, B)
    C = np.array([[0, 0], [1, 0], [1, 3], [0, 3]], float)
    assert not inscribed_cell_congruence(A, C)


def test_rhombus_not_inscribed():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    s = math.sqrt(3) / 2
    rhombus = np.array([[0, 0], [1, 0], [1.5, s], [0.5, s]])
    with pytest.raises(NotInscribed):
        inscribed_cell_congruence(square, rhombus)


@pytest.mark.parametrize("seed", range(8))
def test_cyclic_polygon_from_sides(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(3, 8))
    angles = np.sort(rng.uniform(0, 2 * math.pi, size=k))
    R = rng.uniform(0.5, 3)
    P = R * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    sides = np.linalg.norm(P - np.roll(P, -1, axis=0), axis=1)
    Q = cyclic_polygon_from_sides(sides)
    assert np.allclose(np.linalg.norm(Q - np.roll(Q, -1, axis=0), axis=1), sides, atol=1e-9)
    assert best_isometry(P, Q).residual < 1e-8


def test_cyclic_polygon_rejects_bad_sides():
    with pytest.raises(InvalidParameters):
        cyclic_polygon_from_sides([1, 1, 3])


def test_compare_rotated_cube(cube):
    C = CenterPolytope(cube, 1.0)
    C2, Q, _ = transformed_copy(C, np.random.default_rng(5))
    v = rigidity_compare(C, C2)
    assert v.kind == "congruent"
    assert v.isometry.residual < 1e-8
    assert np.allclose(v.isometry.apply(C.points), C2.points[list(v.facet_map)], atol=1e-8)


def test_compare_verdicts(cube, tetra):
    C = CenterPolytope(cube, 1.0)
    assert rigidity_compare(C, CenterPolytope(tetra, 1.0)).kind == "lattice_mismatch"
    assert rigidity_compare(C, C.with_radius(1.2)).kind == "radius_mismatch"
    with pytest.raises(NotBasic):
        rigidity_compare(C, C.with_radius(0.8))
    with pytest.raises(InvalidParameters):
        square = CenterPolytope([[0, 0], [1, 0], [1, 1], [0, 1]], 1.0)
        rigidity_compare(C, square)


def test_compare_perturbed_random():
    pts = random_hull_points(8, 3, 11)
    r = 1.1 * min_basic_radius(pts).radius
    C = CenterPolytope(pts, r)
    moved = pts.copy()
    moved[0] += 0.05 * np.array([0.6, 0.8, 0.0])
    v = rigidity_compare(C, CenterPolytope(moved, r))
    assert v.kind in ("lattice_mismatch", "angle_mismatch")


def test_congruent_cells_are_congruent():
    pts = random_hull_points(8, 3, 12)
    r = 1.1 * min_basic_radius(pts).radius
    C = CenterPolytope(pts, r)
    C2, _, _ = transformed_copy(C, np.random.default_rng(12))
    v = rigidity_compare(C, C2)
    assert v.congruent
    fmap = v.facet_map
    for k in (1, 2):
        for S in C.boundary.cells[k]:
            assert inscribed_cell_congruence(C.points[list(S)], C2.points[[fmap[i] for i in S]])
    for i, j in C.boundary.cells[1]:
        assert abs(np.linalg.norm(C.points[i] - C.points[j]) - np.linalg.norm(C2.points[fmap[i]] - C2.points[fmap[j]])) < 1e-8


def test_planar_compare_runs():
    pentagon = _regular_polygon(5)
    r = 1.1 * min_basic_radius(pentagon).radius
    C = CenterPolytope(pentagon, r)
    C2, _, _ = transformed_copy(C, np.random.default_rng(3))
    assert rigidity_compare(C, C2).congruent
