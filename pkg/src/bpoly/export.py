"""Geometry export: OBJ polylines/triangles for d=3 and JSON for any d."""

from __future__ import annotations

import math

import numpy as np

from .ballpoly import CenterPolytope, build_face_lattice, realize_vertices
from .errors import UnsupportedDimension

DEFAULT_ARC_SEGMENTS = 16
DEFAULT_DEPTH = 1


def edge_arc(C: CenterPolytope, pair, p, q, segments: int = DEFAULT_ARC_SEGMENTS) -> np.ndarray:
    """Sample the circular edge between vertices p and q on spheres ``pair``.

    Of the two arcs of the intersection circle joining p and q, the one whose
    midpoint lies in every generating ball is returned.
    """
    ci, cj = C.points[pair[0]], C.points[pair[1]]
    m = 0.5 * (ci + cj)
    axis = (cj - ci) / np.linalg.norm(cj - ci)
    e1 = (p - m) / np.linalg.norm(p - m)
    e2 = np.cross(axis, e1)
    rho = float(np.linalg.norm(p - m))
    phi = math.atan2(float((q - m) @ e2), float((q - m) @ e1)) % (2 * math.pi)
    eps = C.tolerance.eps * 10

    def sample(sweep):
        t = np.linspace(0.0, sweep, segments + 1)
        return m + rho * (np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2))

    for sweep in (phi, phi - 2 * math.pi):
        arc = sample(sweep)
        mid = arc[segments // 2] if segments > 1 else 0.5 * (arc[0] + arc[-1])
        if np.all(np.linalg.norm(C.points - mid, axis=1) <= C.r + eps):
            arc[0], arc[-1] = p, q
            return arc
    raise ValueError(f"no arc of edge {pair} lies in the polyhedron")


def _subdivide(tri, center, radius, depth):
    if depth == 0:
        return [tri]
    a, b, c = tri

    def mid(u, v):
        w = 0.5 * (u + v) - center
        return center + radius * w / np.linalg.norm(w)

    ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
    out = []
    for t in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)):
        out.extend(_subdivide(t, center, radius, depth - 1))
    return out


def facet_patch(C: CenterPolytope, i: int, boundary: np.ndarray, depth: int = DEFAULT_DEPTH):
    """Triangulate the spherical facet of ball ``i`` bounded by ``boundary`` points."""
    c = C.points[i]
    g = boundary.mean(axis=0) - c
    apex = c + C.r * g / np.linalg.norm(g)
    n = (apex - c) / C.r
    t1 = np.linalg.svd(n.reshape(1, 3))[2][1]
    t2 = np.cross(n, t1)
    rel = boundary - apex
    order = np.argsort(np.arctan2(rel @ t2, rel @ t1))
    ring = boundary[order]
    tris = []
    for k in range(len(ring)):
        tris.extend(_subdivide((apex, ring[k], ring[(k + 1) % len(ring)]), c, C.r, depth))
    return tris


def export_obj(C: CenterPolytope, segments: int = DEFAULT_ARC_SEGMENTS, depth: int = DEFAULT_DEPTH) -> str:
    if C.dim != 3:
        raise UnsupportedDimension("OBJ export needs d = 3")
    L = build_face_lattice(C)
    verts = realize_vertices(C)
    lines = [f"# bpoly ball polyhedron r={C.r!r} n={C.n}", f"# vertices {len(verts)}"]
    coords: list[np.ndarray] = []
    vid = {}
    for S in sorted(verts):
        coords.append(verts[S])
        vid[S] = len(coords)
    polylines = []
    arcs_by_facet: dict[int, list[np.ndarray]] = {i: [] for i in range(C.n)}
    for pair in L.faces[1]:
        ends = [S for S in verts if set(pair) <= set(S)]
        arc = edge_arc(C, pair, verts[ends[0]], verts[ends[1]], segments)
        idx = [vid[ends[0]]]
        for x in arc[1:-1]:
            coords.append(x)
            idx.append(len(coords))
        idx.append(vid[ends[1]])
        polylines.append((pair, idx))
        for i in pair:
            arcs_by_facet[i].append(arc)
    faces = []
    for i in range(C.n):
        boundary = np.vstack([a[:-1] for a in arcs_by_facet[i]] + [a[-1:] for a in arcs_by_facet[i]])
        boundary = np.unique(np.round(boundary, 12), axis=0)
        for tri in facet_patch(C, i, boundary, depth):
            ids = []
            for x in tri:
                coords.append(np.asarray(x))
                ids.append(len(coords))
            faces.append((i, ids))
    lines.append("o ball_polyhedron")
    lines.extend("v " + " ".join(format(float(v), ".12g") for v in x) for x in coords)
    lines.append("g edges")
    for pair, idx in polylines:
        lines.append("l " + " ".join(map(str, idx)))
    current = None
    for i, ids in faces:
        if i != current:
            lines.append(f"g facet_{C.labels[i]}")
            current = i
        lines.append("f " + " ".join(map(str, ids)))
    return "\n".join(lines) + "\n"


def export_json(C: CenterPolytope) -> dict:
    L = build_face_lattice(C)
    verts = realize_vertices(C)
    lab = C.labels
    faces = []
    for k, fk in enumerate(L.faces):
        for S in fk:
            entry = {"dim": k, "S": [lab[i] for i in S]}
            if k == 0:
                entry["coords"] = [float(v) for v in verts[S]]
            faces.append(entry)
    facets = {
        lab[i]: {
            "center": [float(v) for v in C.points[i]],
            "vertices": [[lab[j] for j in S] for S in L.faces[0] if i in S],
        }
        for i in range(C.n)
    }
    return {
        "dim": C.dim,
        "r": C.r,
        "f_vector": list(L.f_vector),
        "facets": facets,
        "faces": faces,
    }
