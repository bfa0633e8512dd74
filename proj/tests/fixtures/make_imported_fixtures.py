#!/usr/bin/env python3
"""Regenerate the imported-geometry fixtures (voronoi_10x10.json, penrose_10x10.json).

Both are 10x10 mm patches of aperiodic-ish line networks, the kind of input the
importer has to cope with: unordered points, shared vertices, edges cut at the
window boundary. Deterministic: fixed seed and fixed grid offsets.
"""

import json
import math
import os
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
BOX = 5.0  # half-width, window is [-5,5]^2


def clip_to_box(p, q, half):
    # Liang-Barsky against the square [-half,half]^2
    t0, t1 = 0.0, 1.0
    dx, dy = q[0] - p[0], q[1] - p[1]
    for pc, qc in (
        (-dx, p[0] + half),
        (dx, half - p[0]),
        (-dy, p[1] + half),
        (dy, half - p[1]),
    ):
        if pc == 0.0:
            if qc < 0.0:
                return None
            continue
        r = qc / pc
        if pc < 0.0:
            if r > t1:
                return None
            if r > t0:
                t0 = r
        else:
            if r < t0:
                return None
            if r < t1:
                t1 = r
    a = (p[0] + t0 * dx, p[1] + t0 * dy)
    b = (p[0] + t1 * dx, p[1] + t1 * dy)
    return a, b


def write_fixture(name, label, segments_xy):
    # weld on a fine grid, canonical segment order, drop dust
    key_of = {}
    pts = []
    segs = set()
    for (ax, ay), (bx, by) in segments_xy:
        if math.hypot(bx - ax, by - ay) < 1e-5:
            continue
        ids = []
        for x, y in ((ax, ay), (bx, by)):
            k = (round(x * 1e6), round(y * 1e6))
            if k not in key_of:
                key_of[k] = len(pts)
                pts.append((k[0] / 1e6, k[1] / 1e6))
            ids.append(key_of[k])
        a, b = sorted(ids)
        if a != b:
            segs.add((a, b))
    doc = {
        "label": label,
        "points": [[px, py, 0] for px, py in pts],
        "segments": [list(s) for s in sorted(segs)],
        "units": "mm",
        "z": 0,
    }
    path = os.path.join(HERE, name)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print(f"{name}: {len(pts)} points, {len(segs)} segments")


def voronoi_patch():
    from scipy.spatial import Voronoi

    rng = np.random.default_rng(12345)
    sites = rng.uniform(-6.5, 6.5, size=(48, 2))
    vor = Voronoi(sites)
    out = []
    for (i, j) in vor.ridge_vertices:
        if i < 0 or j < 0:
            continue  # unbounded ridge
        p = tuple(vor.vertices[i])
        q = tuple(vor.vertices[j])
        c = clip_to_box(p, q, BOX)
        if c is not None:
            out.append(c)
    write_fixture("voronoi_10x10.json", "voronoi", out)


def penrose_patch():
    # de Bruijn pentagrid: five families of parallel lines, one rhombus per
    # line intersection. Offsets sum to zero and are irregular enough that no
    # three lines meet at a point.
    gamma = np.array([0.13, 0.21, 0.29, 0.11, -0.74])
    e = np.array(
        [[math.cos(2 * math.pi * j / 5), math.sin(2 * math.pi * j / 5)] for j in range(5)]
    )
    scale = 1.6  # rhombus side length in mm
    out = []
    span = range(-9, 10)
    for r in range(5):
        for s in range(r + 1, 5):
            m_rs = np.array([e[r], e[s]])
            for m in span:
                for n in span:
                    rhs = np.array([m - gamma[r], n - gamma[s]])
                    z = np.linalg.solve(m_rs, rhs)
                    if abs(z[0]) > 8.0 or abs(z[1]) > 8.0:
                        continue
                    k = np.ceil(e @ z + gamma)
                    k[r], k[s] = m, n
                    base = k @ e
                    # rhombus corners in cyclic order
                    corners = [
                        base,
                        base + e[r],
                        base + e[r] + e[s],
                        base + e[s],
                    ]
                    corners = [(scale * c[0], scale * c[1]) for c in corners]
                    for t in range(4):
                        p, q = corners[t], corners[(t + 1) % 4]
                        c = clip_to_box(p, q, BOX)
                        if c is not None:
                            out.append(c)
    write_fixture("penrose_10x10.json", "penrose_p3", out)


if __name__ == "__main__":
    voronoi_patch()
    penrose_patch()
