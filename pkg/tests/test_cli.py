import json
import math

import numpy as np
import pytest

from bpoly.cli import main
from bpoly.errors import ParseError
from bpoly.generators import generate, regular_simplex
from bpoly.instance import Instance, dumps_instance, loads_instance, write_instance


@pytest.fixture
def cube_file(tmp_path, cube):
    path = tmp_path / "cube.json"
    write_instance(Instance(3, 1.0, cube), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------ instances


def test_instance_roundtrip_and_key_order(cube):
    text = dumps_instance(Instance(3, 1.0, cube, tuple(f"p{i}" for i in range(8))))
    assert list(json.loads(text)) == ["dim", "r", "points", "labels"]
    inst = loads_instance(text)
    assert inst.labels[0] == "p0" and np.array_equal(inst.points, cube)
    assert dumps_instance(inst) == text


def test_instance_numbers_roundtrip_exactly():
    pts = np.array([[1 / 3, -0.0, math.pi], [1e-300, 2.5, -7.125]])
    inst = loads_instance(dumps_instance(Instance(3, 0.1, pts)))
    assert np.array_equal(inst.points, pts)
    assert "-0" not in dumps_instance(Instance(3, 0.1, pts)).replace("-0.", "")


@pytest.mark.parametrize(
    "text",
    ["{not json", "[]", '{"dim": 3, "r": 1}', '{"dim": 2, "r": -1, "points": [[0, 0]]}',
     '{"dim": 2, "r": 1, "points": [[0, 0, 1]]}', '{"dim": 2, "r": 1, "points": [[0, "a"]]}'],
)
def test_instance_parse_errors(text):
    with pytest.raises(ParseError):
        loads_instance(text)


# ----------------------------------------------------------- generators


def test_generate_kinds():
    inst = generate("moment", n=6, d=3)
    assert np.allclose(inst.points[:, 0], np.linspace(-1, 1, 6))
    inst = generate("cube", d=3, r=1)
    assert inst.r == 1.0 and len(inst.points) == 8
    S = regular_simplex(3)
    dist = np.linalg.norm(S[:, None] - S[None], axis=2)
    assert np.allclose(dist[np.triu_indices(4, 1)], 1.0)
    a = generate("random", n=10, d=3, seed=7)
    b = generate("random", n=10, d=3, seed=7)
    assert np.array_equal(a.points, b.points) and a.r == b.r
    assert a.center_polytope().n == 10


# ------------------------------------------------------------------ cli


def test_validate_exit_codes(capsys, tmp_path, cube, cube_file):
    code, out, _ = run(capsys, "validate", cube_file)
    assert code == 0 and "is_basic: True" in out
    small = tmp_path / "small.json"
    write_instance(Instance(3, 0.8, cube), small)
    code, out, _ = run(capsys, "validate", small, "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["voronoi_vertices_interior_ok"] is False and doc["status"] == "fail"
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(capsys, "validate", bad)[0] == 2
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2


def test_reports_on_cube(capsys, cube_file):
    code, out, _ = run(capsys, "fvector", cube_file)
    assert code == 0 and out.strip() == "fvector 6 12 8"
    code, out, _ = run(capsys, "euler", cube_file)
    assert code == 0 and out.strip() == "euler: 6-12+8 = 2 OK"
    code, out, _ = run(capsys, "ubt", cube_file, "--json")
    assert code == 0 and json.loads(out)["margins"] == [6, 6, 0]
    code, out, _ = run(capsys, "faces", cube_file, "--json")
    assert json.loads(out)["f_vector"] == [6, 12, 8]


def test_not_basic_report_exits_1(capsys, tmp_path, cube):
    path = tmp_path / "small.json"
    write_instance(Instance(3, 0.8, cube), path)
    assert run(capsys, "fvector", path)[0] == 1


def test_moment_ubt_sharp(capsys, tmp_path):
    path = tmp_path / "m.json"
    assert run(capsys, "gen", "moment", "--n", 6, "--d", 3, "-o", path)[0] == 0
    code, out, _ = run(capsys, "fvector", path)
    assert out.strip() == "fvector 8 12 6"
    code, out, _ = run(capsys, "ubt", path, "--json")
    assert code == 0 and json.loads(out)["margins"] == [0, 0, 0]


def test_tetra_dihedrals(capsys, tmp_path):
    path = tmp_path / "t.json"
    write_instance(Instance(3, 1.0, regular_simplex(3)), path)
    code, out, _ = run(capsys, "dihedrals", path, "--json")
    rows = json.loads(out)["dihedrals"]
    assert code == 0 and len(rows) == 6
    assert all(abs(r["theta"] - 2 * math.pi / 3) < 1e-9 for r in rows)


def test_gen_roundtrip_byte_identical(capsys, tmp_path):
    path = tmp_path / "r.json"
    run(capsys, "gen", "random", "--d", 3, "--n", 10, "--seed", 7, "-o", path)
    text = path.read_text()
    code, out, _ = run(capsys, "gen", "random", "--d", 3, "--n", 10, "--seed", 7)
    assert out == text
    assert dumps_instance(loads_instance(text)) == text
    assert run(capsys, "validate", path)[0] == 0


def test_gen_bad_params(capsys):
    assert run(capsys, "gen", "random", "--d", 3)[0] == 2
    assert run(capsys, "gen", "moment", "--n", 3, "--d", 3)[0] == 2


def test_compare(capsys, tmp_path):
    inst = generate("random", n=8, d=3, seed=3)
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_instance(inst, a)
    write_instance(Instance(3, inst.r, inst.points[::-1] @ Q.T + 1.0), b)
    code, out, _ = run(capsys, "compare", a, b)
    assert code == 0 and "verdict: congruent" in out and "residual" in out
    pts = inst.points.copy()
    pts[0] += [0.05, 0, 0]
    c = tmp_path / "c.json"
    write_instance(Instance(3, inst.r, pts), c)
    code, out, _ = run(capsys, "compare", a, c, "--json")
    assert code == 1 and json.loads(out)["verdict"] in ("angle_mismatch", "lattice_mismatch")
    sq = tmp_path / "sq.json"
    write_instance(Instance(2, 1.0, np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)), sq)
    assert run(capsys, "compare", a, sq)[0] == 2


def test_export_obj_cube(capsys, cube_file):
    code, out, _ = run(capsys, "export", cube_file, "--format", "obj")
    assert code == 0
    assert "# vertices 6" in out
    assert sum(1 for line in out.splitlines() if line.startswith("l ")) == 12
    assert sum(1 for line in out.splitlines() if line.startswith("g facet_")) == 8
    arcs = [line.split()[1:] for line in out.splitlines() if line.startswith("l ")]
    assert all(len(a) == 17 for a in arcs)


def test_export_obj_vertices_on_spheres(capsys, cube_file, cube):
    _, out, _ = run(capsys, "export", cube_file, "--format", "obj", "--arc-segments", 8)
    v = np.array([[float(x) for x in line.split()[1:]] for line in out.splitlines() if line.startswith("v ")])
    # every exported point lies in the polyhedron and on at least one sphere
    dist = np.linalg.norm(v[:, None] - cube[None], axis=2)
    assert np.all(dist <= 1 + 1e-9)
    assert np.all(np.min(np.abs(dist - 1), axis=1) < 1e-9)


def test_export_json_tetra(capsys, tmp_path):
    path = tmp_path / "t.json"
    write_instance(Instance(3, 1.0, regular_simplex(3)), path)
    code, out, _ = run(capsys, "export", path)
    doc = json.loads(out)
    assert code == 0 and sorted(doc["facets"]) == ["c1", "c2", "c3", "c4"]
    assert doc["f_vector"] == [4, 6, 4]


def test_export_obj_rejects_d4(capsys, tmp_path):
    path = tmp_path / "m4.json"
    run(capsys, "gen", "moment", "--n", 7, "--d", 4, "-o", path)
    assert run(capsys, "export", path, "--format", "obj")[0] == 2
    code, out, _ = run(capsys, "export", path)
    assert code == 0 and json.loads(out)["f_vector"] == [14, 28, 21, 7]
