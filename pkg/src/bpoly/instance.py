"""Instance files: one JSON document with keys dim, r, points, labels."""

from __future__ import annotations

from dataclasses import dataclass
import json
import math

import numpy as np

from .errors import ParseError


@dataclass(frozen=True)
class Instance:
    dim: int
    r: float
    points: np.ndarray
    labels: tuple = ()

    def center_polytope(self, tol: float | None = None):
        from .ballpoly import CenterPolytope
        from .geomcore import DEFAULT_TOL

        return CenterPolytope(self.points, self.r, self.labels, DEFAULT_TOL if tol is None else tol)


def _num(x: float) -> str:
    x = float(x) + 0.0  # drops negative zero
    if not math.isfinite(x):
        raise ValueError("non-finite coordinate")
    return format(x, ".17g")


def dumps_instance(inst: Instance) -> str:
    labels = list(inst.labels) or [f"c{i + 1}" for i in range(len(inst.points))]
    rows = ",\n".join("    [" + ", ".join(_num(v) for v in p) + "]" for p in inst.points)
    return (
        "{\n"
        f'  "dim": {int(inst.dim)},\n'
        f'  "r": {_num(inst.r)},\n'
        f'  "points": [\n{rows}\n  ],\n'
        f'  "labels": {json.dumps(labels)}\n'
        "}\n"
    )


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    for key in ("dim", "r", "points"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    dim, r, points = doc["dim"], doc["r"], doc["points"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dim must be a positive integer")
    if isinstance(r, bool) or not isinstance(r, (int, float)) or not r > 0:
        raise ParseError("r must be a positive number")
    if not isinstance(points, list) or not points:
        raise ParseError("points must be a nonempty list")
    for p in points:
        if not isinstance(p, list) or len(p) != dim:
            raise ParseError(f"every point must have {dim} coordinates")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in p):
            raise ParseError("coordinates must be numbers")
    labels = doc.get("labels") or []
    if labels and (len(labels) != len(points) or not all(isinstance(s, str) for s in labels)):
        raise ParseError("labels must be strings, one per point")
    return Instance(dim, float(r), np.array(points, dtype=float), tuple(labels))


def read_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_instance(text)


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))
