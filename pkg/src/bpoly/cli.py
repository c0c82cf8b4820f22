"""``bpoly`` command-line front end.

Exit codes: 0 success / check holds, 1 check fails, 2 usage or parse error,
3 geometry error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import ballpoly, bounds, export, generators, rigidity
from .errors import BpolyError, GeometryError, InvalidParameters, NotBasic, ParseError, UnsupportedDimension
from .geomcore import DEFAULT_TOL
from .instance import dumps_instance, read_instance

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GEOMETRY = 0, 1, 2, 3


def _load(path, args):
    inst = read_instance(path)
    return inst.center_polytope(args.tol)


def _basic(C):
    report = ballpoly.validate_basic(C)
    if not report.is_basic:
        raise NotBasic("instance is not a basic r-ball polyhedron", report)
    return report


def _emit(args, doc: dict, text: str):
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def cmd_validate(args) -> int:
    C = _load(args.instance, args)
    report = ballpoly.validate_basic(C)
    doc = {"command": "validate", **report.as_dict(), "status": "ok" if report.is_basic else "fail"}
    text = "\n".join(
        [
            f"hull_vertices_ok: {report.hull_vertices_ok}",
            f"r_convex_position_ok: {report.r_convex_position_ok}"
            + (f" (witness {C.labels[report.r_convex_witness]})" if report.r_convex_witness is not None else ""),
            f"voronoi_vertices_interior_ok: {report.voronoi_vertices_interior_ok}"
            f" (worst circumradius {report.worst_circumradius:.12g}, r {C.r:.12g})",
            f"is_basic: {report.is_basic}",
        ]
        + ([f"indeterminate: {', '.join(report.indeterminate)}"] if report.indeterminate else [])
    )
    _emit(args, doc, text)
    return EXIT_OK if report.is_basic else EXIT_FAIL


def cmd_faces(args) -> int:
    C = _load(args.instance, args)
    L = ballpoly.build_face_lattice(C, _basic(C))
    doc = {"command": "faces", **L.as_dict(), "status": "ok"}
    text = "\n".join(
        f"{k}-faces ({len(fk)}): " + " ".join("{" + ",".join(C.labels[i] for i in S) + "}" for S in fk)
        for k, fk in enumerate(L.faces)
    )
    _emit(args, doc, text)
    return EXIT_OK


def cmd_fvector(args) -> int:
    C = _load(args.instance, args)
    L = ballpoly.build_face_lattice(C, _basic(C))
    _emit(args, {"command": "fvector", "f_vector": list(L.f_vector), "status": "ok"},
          "fvector " + " ".join(map(str, L.f_vector)))
    return EXIT_OK


def cmd_ubt(args) -> int:
    C = _load(args.instance, args)
    L = ballpoly.build_face_lattice(C, _basic(C))
    res = bounds.ubt_check(L.f_vector, C.n, C.dim)
    c = bounds.cyclic_face_numbers(C.n, C.dim).c
    doc = {
        "command": "ubt",
        "f_vector": list(L.f_vector),
        "cyclic_face_numbers": list(c),
        "margins": list(res.margins),
        "holds": res.holds,
        "status": "ok" if res.holds else "fail",
    }
    text = (
        f"fvector {' '.join(map(str, L.f_vector))}\n"
        f"bound   {' '.join(str(c[C.dim - k]) for k in range(1, C.dim + 1))}\n"
        f"margins {' '.join(map(str, res.margins))}\n"
        f"ubt: {'OK' if res.holds else 'VIOLATED'}"
    )
    _emit(args, doc, text)
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_euler(args) -> int:
    C = _load(args.instance, args)
    L = ballpoly.build_face_lattice(C, _basic(C))
    f = L.f_vector
    ok = ballpoly.euler_check(f, C.dim)
    total = ballpoly.euler_sum(f)
    expr = str(f[0]) + "".join(("-" if i % 2 else "+") + str(x) for i, x in enumerate(f) if i)
    doc = {"command": "euler", "f_vector": list(f), "sum": total,
           "expected": 1 + (-1) ** (C.dim + 1), "holds": ok, "status": "ok" if ok else "fail"}
    _emit(args, doc, f"euler: {expr} = {total} {'OK' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dihedrals(args) -> int:
    C = _load(args.instance, args)
    _basic(C)
    angles = ballpoly.dihedral_angles(C)
    rows = [
        {"pair": [C.labels[i] for i in a.pair], "theta": a.theta, "theta_over_pi": a.theta / math.pi}
        for a in angles
    ]
    text = "\n".join(f"{r['pair'][0]} {r['pair'][1]} {r['theta']:.15g}" for r in rows)
    _emit(args, {"command": "dihedrals", "dihedrals": rows, "status": "ok"}, text)
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = 0 if args.seed is None else args.seed
    inst = generators.generate(args.kind, n=args.n, d=args.d, r=args.r, seed=seed)
    text = dumps_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args) -> int:
    P1, P2 = _load(args.first, args), _load(args.second, args)
    if P1.dim != P2.dim:
        print(f"dimension mismatch: {P1.dim} vs {P2.dim}", file=sys.stderr)
        return EXIT_USAGE
    v = rigidity.rigidity_compare(P1, P2, angle_tol=args.angle_tol)
    doc = {"command": "compare", "verdict": v.kind, "status": "ok" if v.congruent else "fail"}
    lines = [f"verdict: {v.kind}"]
    if v.isometry is not None:
        doc.update(
            linear=v.isometry.linear.tolist(),
            translation=v.isometry.translation.tolist(),
            residual=v.isometry.residual,
            proper=v.isometry.proper,
            facet_map=[P2.labels[j] for j in v.facet_map],
        )
        lines.append("isometry:")
        lines.extend("  " + " ".join(f"{x: .12f}" for x in row) for row in v.isometry.linear)
        lines.append("translation: " + " ".join(f"{x:.12g}" for x in v.isometry.translation))
        lines.append(f"residual: {v.isometry.residual:.3e} ({'proper' if v.isometry.proper else 'improper'})")
    if v.max_deviation is not None:
        doc["max_deviation"] = v.max_deviation
        lines.append(f"max angle deviation: {v.max_deviation:.3e}")
    if v.witness is not None:
        doc["witness"] = [P1.labels[i] for i in v.witness]
        lines.append("witness pair: " + " ".join(P1.labels[i] for i in v.witness))
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if v.congruent else EXIT_FAIL


def cmd_export(args) -> int:
    C = _load(args.instance, args)
    _basic(C)
    if args.format == "obj":
        text = export.export_obj(C, segments=args.arc_segments, depth=args.depth)
    else:
        text = json.dumps(export.export_json(C), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--arc-segments", type=int, default=export.DEFAULT_ARC_SEGMENTS)
    common.add_argument("--json", action="store_true", help="print a JSON report")

    parser = argparse.ArgumentParser(prog="bpoly", description="basic r-ball polyhedra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in [
        ("validate", cmd_validate, "check that an instance defines a basic r-ball polyhedron"),
        ("faces", cmd_faces, "list the face lattice"),
        ("fvector", cmd_fvector, "print the f-vector"),
        ("ubt", cmd_ubt, "compare the f-vector with the cyclic-polytope bound"),
        ("euler", cmd_euler, "check the Euler-Poincaré relation"),
        ("dihedrals", cmd_dihedrals, "print inner dihedral angles"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("instance")
        p.set_defaults(func=fn)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=["moment", "simplex", "cube", "random"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", parents=[common], help="test two instances for congruence")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--angle-tol", type=float, default=rigidity.DEFAULT_ANGLE_TOL)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", parents=[common], help="export geometry")
    p.add_argument("instance")
    p.add_argument("--format", choices=["obj", "json"], default="json")
    p.add_argument("--depth", type=int, default=export.DEFAULT_DEPTH, help="facet subdivision depth")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotBasic as exc:
        print(f"not basic: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(json.dumps(exc.report.as_dict()), file=sys.stderr)
        return EXIT_FAIL
    except (InvalidParameters, UnsupportedDimension) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, BpolyError, np.linalg.LinAlgError) as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
