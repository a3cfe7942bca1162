"""Deterministic polygon families in user units (integer vertices)."""
from __future__ import annotations

import random

import numpy as np

from .geometry import trace_cycles

FAMILIES = ("staircase", "snake", "comb", "mount", "random-ortho")


def _from_cells(cells: set) -> list[list[int]]:
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    x0, y0 = min(xs), min(ys)
    mask = np.zeros((max(xs) - x0 + 1, max(ys) - y0 + 1), dtype=bool)
    for x, y in cells:
        mask[x - x0, y - y0] = True
    cyc = trace_cycles(mask, list(range(mask.shape[0] + 1)), list(range(mask.shape[1] + 1)))
    if len(cyc) != 1:
        raise RuntimeError("cell set does not have a single boundary cycle")
    return [[int(x), int(y)] for x, y in cyc[0]]


def staircase(k: int, seed: int = 0) -> list[list[int]]:
    """Down-staircase with k steps (2k+2 vertices); step sizes vary with the seed."""
    rng = random.Random(seed)
    ws = [rng.randint(1, 3) for _ in range(k)]
    hs = [rng.randint(1, 3) for _ in range(k)]
    x = sum(ws)
    pts = [[0, 0], [x, 0]]
    y = 0
    for i in range(k):
        y += hs[i]
        pts.append([x, y])
        x -= ws[k - 1 - i]
        pts.append([x, y])
    pts.pop()
    pts.append([0, y])
    return pts


def comb(k: int, seed: int = 0) -> list[list[int]]:
    """Base strip with k unit-spaced teeth; comb(2) is the M8 shape scaled by 1/2."""
    w = 4 * k - 2
    pts = [[0, 0], [w, 0]]
    for i in range(k - 1, -1, -1):
        x0 = 4 * i
        pts += [[x0 + 2, 4], [x0, 4]] if i == k - 1 else [[x0 + 2, 2], [x0 + 2, 4], [x0, 4]]
        if i > 0:
            pts.append([x0, 2])
    pts[2:2] = [[w, 4]]
    return _dedupe(pts)


def _dedupe(pts):
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return out


def mount(k: int, seed: int = 0) -> list[list[int]]:
    """Histogram over a flat base with k columns of random heights."""
    rng = random.Random(seed)
    cells = set()
    x = 0
    for _ in range(k):
        w = rng.randint(1, 2)
        h = rng.randint(1, 2 * k if k > 1 else 2)
        for dx in range(w):
            for y in range(h):
                cells.add((x + dx, y))
        x += w
    return _from_cells(cells)


def snake(k: int, seed: int = 0) -> list[list[int]]:
    """Meander of k vertical bars joined alternately at the top and the bottom."""
    rng = random.Random(seed)
    H = rng.randint(6, 10)
    cells = set()
    x = 0
    bars = []
    for i in range(k):
        w = rng.randint(1, 2)
        bars.append((x, x + w))
        for dx in range(w):
            for y in range(H):
                cells.add((x + dx, y))
        x += w + rng.randint(1, 3)
    for i in range(k - 1):
        t = rng.randint(1, 2)
        xa, xb = bars[i][1], bars[i + 1][0]
        ys = range(H - t, H) if i % 2 == 0 else range(0, t)
        for xx in range(xa, xb):
            for y in ys:
                cells.add((xx, y))
    return _from_cells(cells)


def _ring(cells, c):
    x, y = c
    return [(x + 1, y), (x + 1, y + 1), (x, y + 1), (x - 1, y + 1),
            (x - 1, y), (x - 1, y - 1), (x, y - 1), (x + 1, y - 1)]


def _simple_add(cells, c) -> bool:
    """Adding c keeps the union a disk with no pinch vertices."""
    ring = [n in cells for n in _ring(cells, c)]
    if not any(ring[0::2]):
        return False
    # diagonal occupied while both orthogonal neighbours empty is a pinch
    for k in (1, 3, 5, 7):
        if ring[k] and not ring[k - 1] and not ring[(k + 1) % 8]:
            return False
    runs = sum(1 for k in range(8) if ring[k] and not ring[k - 1])
    return runs == 1


def _corner(cells, v) -> int:
    x, y = v
    q = [(x, y) in cells, (x - 1, y) in cells, (x - 1, y - 1) in cells, (x, y - 1) in cells]
    s = sum(q)
    if s in (1, 3):
        return 1
    if s == 2 and q[0] == q[2]:
        return 2
    return 0


def _delta(cells, c) -> int:
    x, y = c
    corners = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
    before = sum(_corner(cells, v) for v in corners)
    cells.add(c)
    after = sum(_corner(cells, v) for v in corners)
    cells.discard(c)
    return after - before


def random_ortho(k: int, seed: int = 0) -> list[list[int]]:
    """Grow a simply connected cell union until it has k vertices (k rounded up to even)."""
    target = max(4, k + (k % 2))
    rng = random.Random(seed)
    cells = {(0, 0)}
    count = 4
    stall = 0
    while count < target:
        frontier = sorted({n for c in cells for n in _ring(cells, c)[0::2] if n not in cells})
        rng.shuffle(frontier)
        best = None
        for c in frontier:
            if not _simple_add(cells, c):
                continue
            d = _delta(cells, c)
            if count + d <= target and (d > 0 or stall > 4):
                best = (c, d)
                break
            if best is None or d < best[1]:
                best = (c, d)
        if best is None:
            raise RuntimeError("growth stalled")
        c, d = best
        cells.add(c)
        count += d
        stall = stall + 1 if d <= 0 else 0
    poly = _from_cells(cells)
    return poly


def generate(family: str, k: int, seed: int = 0) -> list[list[int]]:
    if k < 1:
        raise ValueError("size must be at least 1")
    fn = {"staircase": staircase, "snake": snake, "comb": comb, "mount": mount,
          "random-ortho": random_ortho}.get(family)
    if fn is None:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return fn(k, seed)
