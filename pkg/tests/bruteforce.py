"""Independent reference evaluations used by the tests.

Everything here works in user units on float lattices and uses only shapely
and plain Python, never the library's own predicates.
"""
from __future__ import annotations

import itertools
import math

import shapely
from shapely.geometry import LineString, Point, Polygon, box

TOL = 1e-9


def shape(vertices) -> Polygon:
    return Polygon([(float(x), float(y)) for x, y in vertices])


def _covers(P, geom) -> bool:
    return P.buffer(TOL, join_style="mitre").covers(geom)


def lattice(vertices, step=0.5, offset=(0.5, 0.5)):
    """Points ((i+ox)*step, (j+oy)*step) strictly inside the polygon."""
    P = shape(vertices)
    x0, y0, x1, y1 = P.bounds
    out = []
    nx = int(math.ceil((x1 - x0) / step))
    ny = int(math.ceil((y1 - y0) / step))
    for i in range(nx):
        for j in range(ny):
            q = (x0 + (i + offset[0]) * step, y0 + (j + offset[1]) * step)
            if P.contains(Point(q)):
                out.append(q)
    return out


def seg_visible(P, p, q) -> bool:
    if p == q:
        return _covers(P, Point(p))
    return _covers(P, LineString([p, q]))


def in_wedge(p, q, start, width) -> bool:
    if p == q:
        return True
    ang = math.degrees(math.atan2(q[1] - p[1], q[0] - p[0])) % 360
    rel = (ang - start) % 360
    return rel <= width + 1e-9 or rel >= 360 - 1e-9


def rect_visible(P, p, q) -> bool:
    x0, x1 = sorted((p[0], q[0]))
    y0, y1 = sorted((p[1], q[1]))
    if x0 == x1 or y0 == y1:
        return seg_visible(P, (x0, y0), (x1, y1))
    return _covers(P, box(x0, y0, x1, y1))


def perp_visible(P, e, q) -> bool:
    """q sees the axis-parallel segment e along a perpendicular chord."""
    (ax, ay), (bx, by) = e
    if ay == by:
        lo, hi = sorted((ax, bx))
        if not lo <= q[0] <= hi:
            return False
        return seg_visible(P, q, (q[0], ay))
    lo, hi = sorted((ay, by))
    if not lo <= q[1] <= hi:
        return False
    return seg_visible(P, q, (ax, q[1]))


def colorable(n, edges, k) -> bool:
    for assign in itertools.product(range(k), repeat=n):
        if all(assign[u] != assign[v] for u, v in edges):
            return True
    return False


def chromatic(n, edges) -> int:
    k = 1 if n else 0
    while n and not colorable(n, edges, k):
        k += 1
    return k


def oracle(vertices, model, step=0.25, offset=(0.37, 0.61)):
    """Candidate-restricted chromatic guarding by rasterized regions.

    Candidates are the vertex-coordinate grid points of the closed polygon;
    a guard's region is the set of lattice points it sees. Two guards
    conflict when they share a lattice point; a subset covers when its
    union is the whole lattice.
    """
    P = shape(vertices)
    xs = sorted({x for x, _ in vertices})
    ys = sorted({y for _, y in vertices})
    cands = [(x, y) for x in xs for y in ys if _covers(P, Point(x, y))]
    pts = lattice(vertices, step, offset)
    if model == "O":
        specs = [(c, s) for c in cands for s in (0, 90, 180, 270)]

        def see(P, cone, q):
            c, s = cone
            return in_wedge(c, q, s, 90) and seg_visible(P, c, q)
    else:
        specs = cands
        see = rect_visible if model == "rect" else seg_visible
    regions = []
    for c in specs:
        r = frozenset(k for k, q in enumerate(pts) if see(P, c, q))
        if r and r not in regions:
            regions.append(r)
    full = frozenset(range(len(pts)))
    n = len(regions)
    best = None
    minimal = []
    for size in range(1, n + 1):
        if best == 1:
            break
        for sub in itertools.combinations(range(n), size):
            if any(set(m) <= set(sub) for m in minimal):
                continue
            if frozenset().union(*(regions[i] for i in sub)) != full:
                continue
            minimal.append(sub)
            edges = [(a, b) for a, b in itertools.combinations(range(size), 2)
                     if regions[sub[a]] & regions[sub[b]]]
            chi = chromatic(size, edges)
            if best is None or chi < best:
                best = chi
    return best, n
