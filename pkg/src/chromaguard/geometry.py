"""Exact polygon model on the doubled integer grid.

Input coordinates are integers in user units. ``validate_polygon`` doubles
them once so that midpoints and the one-unit interior offsets used for guard
placement remain integral. Everything downstream works in doubled units.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Number = Union[int, Fraction]
Point = tuple  # (x, y) of int or Fraction

SCALE = 2


class PolygonError(ValueError):
    """Raised for malformed polygon input; ``code`` names the defect."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Location(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def orient(a: Point, b: Point, c: Point) -> Number:
    """Twice the signed area of triangle abc (positive for a left turn)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def sign(v) -> int:
    return (v > 0) - (v < 0)


def clear_denominators(*pts: Point) -> list:
    """Points rescaled by a common positive factor so Fraction coordinates become ints.

    Orientation signs, collinearity and coordinate order are preserved.
    """
    d = 1
    for q in pts:
        for c in q:
            t = type(c)
            if t is int:
                continue
            if t is Fraction:
                d = d * c.denominator // math.gcd(d, c.denominator)
            else:
                return list(pts)
    if d == 1:
        return [(_scale(q[0], 1), _scale(q[1], 1)) for q in pts]
    return [(_scale(q[0], d), _scale(q[1], d)) for q in pts]


def _scale(c, d: int) -> int:
    if type(c) is int:
        return c * d
    return c.numerator * (d // c.denominator)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    p, a, b = clear_denominators(p, a, b)
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed-segment intersection test."""
    o1, o2 = sign(orient(a, b, c)), sign(orient(a, b, d))
    o3, o4 = sign(orient(c, d, a)), sign(orient(c, d, b))
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and on_segment(c, a, b)) or (o2 == 0 and on_segment(d, a, b))
            or (o3 == 0 and on_segment(a, c, d)) or (o4 == 0 and on_segment(b, c, d)))


def proper_crossing(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Segments cross at a single point interior to both."""
    o1, o2 = sign(orient(a, b, c)), sign(orient(a, b, d))
    o3, o4 = sign(orient(c, d, a)), sign(orient(c, d, b))
    return o1 * o2 < 0 and o3 * o4 < 0


def midpoint(a: Point, b: Point) -> Point:
    return (_half(a[0] + b[0]), _half(a[1] + b[1]))


def _half(v: Number) -> Number:
    if isinstance(v, int) and v % 2 == 0:
        return v // 2
    return Fraction(v) / 2


def shoelace2(vertices: Sequence[Point]) -> Number:
    """Twice the signed area."""
    s = 0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


@dataclass(frozen=True)
class SimplePolygon:
    """Counterclockwise simple polygon starting at its lexicographically smallest vertex."""

    vertices: tuple

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def orthogonal(self) -> bool:
        return False

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def area2(self) -> Number:
        return shoelace2(self.vertices)

    @property
    def area(self) -> Fraction:
        return Fraction(self.area2) / 2

    @property
    def bbox(self) -> tuple:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def user_vertices(self) -> list[list]:
        return [[_user(x), _user(y)] for x, y in self.vertices]


@dataclass(frozen=True)
class OrthoPolygon(SimplePolygon):
    """Simple polygon whose edges alternate horizontal and vertical."""

    @property
    def orthogonal(self) -> bool:
        return True


def _user(v: Number):
    q = Fraction(v) / SCALE
    return int(q) if q.denominator == 1 else q


def _merge_collinear(pts: list) -> list:
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if orient(a, b, c) == 0:
                # straight continuation or a zero-width spike
                if (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
                    raise PolygonError("self_intersection", f"edges fold back at vertex {_upt(b)}")
                changed = True
                continue
            out.append(b)
        if changed:
            pts = out
    return pts


def _canonical(pts: list) -> tuple:
    if shoelace2(pts) < 0:
        pts = pts[::-1]
    k = min(range(len(pts)), key=lambda i: pts[i])
    return tuple(pts[k:] + pts[:k])


def _check_simple(pts: list) -> None:
    n = len(pts)
    if _big(pts):
        for i in range(n):
            for j in range(i + 1, n):
                if j == (i + 1) % n or (j + 1) % n == i:
                    continue
                if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                    _raise_cross(pts, i, j)
        return
    a = np.array(pts, dtype=np.int64)
    b = np.roll(a, -1, axis=0)
    for i in range(n):
        p, q = a[i], b[i]
        js = np.arange(i + 1, n)
        js = js[(js != (i + 1) % n) & ((js + 1) % n != i)]
        if len(js) == 0:
            continue
        c, d = a[js], b[js]
        o1 = _orient_vec(p, q, c)
        o2 = _orient_vec(p, q, d)
        o3 = _orient_vec_rev(c, d, p)
        o4 = _orient_vec_rev(c, d, q)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        hit |= (o1 == 0) & _on_seg_vec(c, p, q)
        hit |= (o2 == 0) & _on_seg_vec(d, p, q)
        hit |= (o3 == 0) & _on_seg_vec_rev(p, c, d)
        hit |= (o4 == 0) & _on_seg_vec_rev(q, c, d)
        if np.any(hit):
            _raise_cross(pts, i, int(js[np.argmax(hit)]))


def _upt(p) -> str:
    """Working-grid point formatted in user units for messages."""
    def f(v):
        q = Fraction(v) / SCALE
        return str(q.numerator) if q.denominator == 1 else str(float(q))
    return f"({f(p[0])}, {f(p[1])})"


def _raise_cross(pts, i, j):
    n = len(pts)
    raise PolygonError("self_intersection",
                       f"edge {_upt(pts[i])}-{_upt(pts[(i + 1) % n])} meets edge "
                       f"{_upt(pts[j])}-{_upt(pts[(j + 1) % n])}")


def _big(pts) -> bool:
    return any(not isinstance(c, (int, np.integer)) or abs(c) > 2 ** 28 for p in pts for c in p)


def _orient_vec(p, q, c):
    return np.sign((q[0] - p[0]) * (c[:, 1] - p[1]) - (q[1] - p[1]) * (c[:, 0] - p[0]))


def _orient_vec_rev(c, d, p):
    return np.sign((d[:, 0] - c[:, 0]) * (p[1] - c[:, 1]) - (d[:, 1] - c[:, 1]) * (p[0] - c[:, 0]))


def _on_seg_vec(c, p, q):
    return ((np.minimum(p[0], q[0]) <= c[:, 0]) & (c[:, 0] <= np.maximum(p[0], q[0]))
            & (np.minimum(p[1], q[1]) <= c[:, 1]) & (c[:, 1] <= np.maximum(p[1], q[1])))


def _on_seg_vec_rev(p, c, d):
    return ((np.minimum(c[:, 0], d[:, 0]) <= p[0]) & (p[0] <= np.maximum(c[:, 0], d[:, 0]))
            & (np.minimum(c[:, 1], d[:, 1]) <= p[1]) & (p[1] <= np.maximum(c[:, 1], d[:, 1])))


def _is_axis_parallel(pts) -> bool:
    n = len(pts)
    return all(pts[i][0] == pts[(i + 1) % n][0] or pts[i][1] == pts[(i + 1) % n][1]
               for i in range(n))


def make_polygon(vertices: Iterable[Point]) -> SimplePolygon:
    """Normalize vertices already on the working grid (no doubling)."""
    pts = [tuple(p) for p in vertices]
    if len(pts) < 3:
        raise PolygonError("too_few", f"polygon needs at least 3 vertices, got {len(pts)}")
    n = len(pts)
    for i in range(n):
        if pts[i] == pts[(i + 1) % n]:
            raise PolygonError("duplicate", f"duplicate consecutive vertex {_upt(pts[i])}")
    if all(orient(pts[0], pts[1], q) == 0 for q in pts[2:]):
        raise PolygonError("zero_area", "polygon is degenerate (all vertices collinear)")
    pts = _merge_collinear(pts)
    if len(pts) < 3:
        raise PolygonError("zero_area", "polygon is degenerate (all vertices collinear)")
    _check_simple(pts)
    if shoelace2(pts) == 0:
        raise PolygonError("zero_area", "polygon has zero area")
    pts = _canonical(pts)
    cls = OrthoPolygon if _is_axis_parallel(pts) else SimplePolygon
    return cls(pts)


def validate_polygon(raw) -> SimplePolygon:
    """Normalize user input: CCW, canonical start, merged collinear runs, doubled coordinates.

    Passing an already validated polygon returns it unchanged.
    """
    if isinstance(raw, SimplePolygon):
        return raw
    pts = []
    for p in raw:
        if len(p) != 2:
            raise PolygonError("malformed", f"vertex {p!r} is not an (x, y) pair")
        x, y = p
        if isinstance(x, bool) or isinstance(y, bool) or not (
                isinstance(x, (int, np.integer)) and isinstance(y, (int, np.integer))):
            if isinstance(x, float) and x.is_integer() and isinstance(y, float) and y.is_integer():
                x, y = int(x), int(y)
            else:
                raise PolygonError("malformed", f"vertex {p!r} must have integer coordinates")
        pts.append((int(x) * SCALE, int(y) * SCALE))
    if len(pts) < 3:
        raise PolygonError("too_few", f"polygon needs at least 3 vertices, got {len(pts)}")
    return make_polygon(pts)


def point_in_polygon(p: Point, poly: SimplePolygon) -> Location:
    """Exact closed-set classification by crossing number."""
    px, py = p
    # clear denominators once so the loop stays in integer arithmetic
    d = 1
    if isinstance(px, Fraction) or isinstance(py, Fraction):
        px, py = Fraction(px), Fraction(py)
        d = px.denominator * py.denominator // math.gcd(px.denominator, py.denominator)
        px, py = int(px * d), int(py * d)
    verts = poly.vertices
    n = len(verts)
    inside = False
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        if d != 1:
            ax, ay, bx, by = ax * d, ay * d, bx * d, by * d
        dx, dy = bx - ax, by - ay
        lhs = (px - ax) * dy
        rhs = dx * (py - ay)
        if (lhs == rhs and min(ax, bx) <= px <= max(ax, bx)
                and min(ay, by) <= py <= max(ay, by)):
            return Location.BOUNDARY
        if (ay > py) != (by > py):
            if dy > 0:
                if lhs < rhs:
                    inside = not inside
            elif lhs > rhs:
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def contains(poly: SimplePolygon, p: Point) -> bool:
    return point_in_polygon(p, poly) is not Location.OUTSIDE


def segment_in_polygon(a: Point, b: Point, poly: SimplePolygon) -> bool:
    """True iff the closed segment ab lies in the closed polygon."""
    if a == b:
        return contains(poly, a)
    if not contains(poly, a) or not contains(poly, b):
        return False
    ts = {Fraction(0), Fraction(1)}
    dx, dy = b[0] - a[0], b[1] - a[1]
    for c, d in poly.edges():
        if proper_crossing(a, b, c, d):
            return False
        for v in (c, d):
            if on_segment(v, a, b):
                ts.add(_param(a, dx, dy, v))
    order = sorted(ts)
    for t0, t1 in zip(order, order[1:]):
        tm = (t0 + t1) / 2
        m = (a[0] + dx * tm, a[1] + dy * tm)
        if not contains(poly, m):
            return False
    return True


def _param(a, dx, dy, v) -> Fraction:
    if dx != 0:
        return Fraction(v[0] - a[0]) / dx
    return Fraction(v[1] - a[1]) / dy


def classify_vertices(poly: SimplePolygon) -> list[str]:
    """'convex' or 'reflex' per vertex (CCW orientation assumed)."""
    v = poly.vertices
    n = len(v)
    return ["convex" if orient(v[i - 1], v[i], v[(i + 1) % n]) > 0 else "reflex"
            for i in range(n)]


def reflex_vertices(poly: SimplePolygon) -> list[Point]:
    return [p for p, k in zip(poly.vertices, classify_vertices(poly)) if k == "reflex"]


def _axis(axis: str) -> str:
    a = axis.lower()
    if a in ("h", "horizontal"):
        return "h"
    if a in ("v", "vertical"):
        return "v"
    raise ValueError(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class CutEdge:
    edge: tuple
    axis: str
    extension: tuple


def cut_edges(poly: SimplePolygon, axis: str) -> list[CutEdge]:
    """Boundary edges of the given axis whose endpoints are both reflex, with their chords."""
    ax = _axis(axis)
    kinds = classify_vertices(poly)
    v = poly.vertices
    n = len(v)
    out = []
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        horizontal = a[1] == b[1]
        if (ax == "h") != horizontal or (a[0] != b[0] and a[1] != b[1]):
            continue
        if kinds[i] == "reflex" and kinds[(i + 1) % n] == "reflex":
            lo, hi = (a, b) if a < b else (b, a)
            ext = (extend_ray(poly, lo, (lo[0] - hi[0], lo[1] - hi[1])),
                   extend_ray(poly, hi, (hi[0] - lo[0], hi[1] - lo[1])))
            out.append(CutEdge(edge=(lo, hi), axis=ax, extension=ext))
    return out


def extend_ray(poly: SimplePolygon, start: Point, direction: tuple) -> Point:
    """First boundary point hit by the open ray from ``start`` (axis-parallel direction)."""
    dx, dy = sign(direction[0]), sign(direction[1])
    best = None
    sx, sy = start
    for c, d in poly.edges():
        if dy == 0:
            # horizontal ray at y = sy
            if min(c[1], d[1]) <= sy <= max(c[1], d[1]):
                if c[1] == d[1]:
                    cands = [c[0], d[0]]
                else:
                    cands = [c[0] + Fraction((sy - c[1]) * (d[0] - c[0]), d[1] - c[1])]
                for x in cands:
                    t = (x - sx) * dx
                    if t > 0 and (best is None or t < best):
                        best = t
        else:
            if min(c[0], d[0]) <= sx <= max(c[0], d[0]):
                if c[0] == d[0]:
                    cands = [c[1], d[1]]
                else:
                    cands = [c[1] + Fraction((sx - c[0]) * (d[1] - c[1]), d[0] - c[0])]
                for y in cands:
                    t = (y - sy) * dy
                    if t > 0 and (best is None or t < best):
                        best = t
    if best is None:
        raise ValueError(f"ray from {start} never meets the boundary")
    best = _norm(best)
    return (sx + dx * best, sy + dy * best)


def _norm(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


# ---------------------------------------------------------------------------
# refined grid


@dataclass(frozen=True, eq=False)
class CellDecomposition:
    """Rectilinear grid over the bounding box with an exact inside flag per cell.

    ``inside[i, j]`` refers to the cell ``[xs[i], xs[i+1]] x [ys[j], ys[j+1]]``.
    """

    xs: tuple
    ys: tuple
    inside: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple:
        return self.inside.shape

    def cell_areas(self) -> np.ndarray:
        dx = np.diff(np.array(self.xs, dtype=np.int64))
        dy = np.diff(np.array(self.ys, dtype=np.int64))
        return np.outer(dx, dy)

    def area(self, mask: np.ndarray | None = None) -> int:
        m = self.inside if mask is None else mask
        return int((self.cell_areas() * m).sum())

    def xi(self, x) -> int:
        return self.xs.index(x)

    def yi(self, y) -> int:
        return self.ys.index(y)

    def cell_of(self, p: Point) -> tuple:
        """Index of the cell whose closed box contains p (lowest index on ties)."""
        i = int(np.searchsorted(self.xs, p[0], side="right")) - 1
        j = int(np.searchsorted(self.ys, p[1], side="right")) - 1
        return min(max(i, 0), len(self.xs) - 2), min(max(j, 0), len(self.ys) - 2)

    def center(self, i: int, j: int) -> Point:
        return midpoint((self.xs[i], self.ys[j]), (self.xs[i + 1], self.ys[j + 1]))


def refined_grid(poly: SimplePolygon, extra: Iterable[Point] = ()) -> CellDecomposition:
    """Grid induced by the vertex coordinates of an orthogonal polygon plus extra points."""
    if not poly.orthogonal:
        raise ValueError("refined_grid requires an orthogonal polygon")
    xs = {p[0] for p in poly.vertices}
    ys = {p[1] for p in poly.vertices}
    for p in extra:
        xs.add(p[0])
        ys.add(p[1])
    xs = tuple(sorted(xs))
    ys = tuple(sorted(ys))
    xidx = {x: i for i, x in enumerate(xs)}
    yidx = {y: j for j, y in enumerate(ys)}
    toggle = np.zeros((len(xs) - 1, len(ys)), dtype=bool)
    for a, b in poly.edges():
        if a[1] == b[1]:
            i0, i1 = sorted((xidx[a[0]], xidx[b[0]]))
            toggle[i0:i1, yidx[a[1]]] ^= True
    # parity of horizontal edges at or below the cell's lower side
    inside = np.logical_xor.accumulate(toggle[:, :-1], axis=1)
    return CellDecomposition(xs, ys, inside)


def grid_from_coords(xs: Iterable, ys: Iterable, poly: SimplePolygon) -> CellDecomposition:
    """Refined grid over explicit coordinate sets (must include the polygon's)."""
    extra = [(x, poly.vertices[0][1]) for x in xs] + [(poly.vertices[0][0], y) for y in ys]
    return refined_grid(poly, extra)


def regrid(mask: np.ndarray, src: CellDecomposition, dst: CellDecomposition) -> np.ndarray:
    """Express a cell mask of ``src`` on the finer grid ``dst``."""
    xc = (np.asarray(dst.xs[:-1], dtype=float) + np.asarray(dst.xs[1:], dtype=float)) / 2
    yc = (np.asarray(dst.ys[:-1], dtype=float) + np.asarray(dst.ys[1:], dtype=float)) / 2
    ii = np.searchsorted(np.asarray(src.xs, dtype=float), xc) - 1
    jj = np.searchsorted(np.asarray(src.ys, dtype=float), yc) - 1
    ok_i = (ii >= 0) & (ii < mask.shape[0])
    ok_j = (jj >= 0) & (jj < mask.shape[1])
    sub = mask[np.clip(ii, 0, mask.shape[0] - 1)][:, np.clip(jj, 0, mask.shape[1] - 1)]
    return sub & ok_i[:, None] & ok_j[None, :]


def trace_cycles(mask: np.ndarray, xs: Sequence, ys: Sequence) -> list[list[Point]]:
    """Boundary cycles of a cell mask, collinear runs merged.

    Outer boundaries come out counterclockwise, holes clockwise. Diagonal
    pinches are split so each cycle is simple.
    """
    nx, ny = mask.shape
    m = np.zeros((nx + 2, ny + 2), dtype=bool)
    m[1:-1, 1:-1] = mask
    out_edges: dict = {}

    def add(a, b):
        out_edges.setdefault(a, []).append(b)

    ii, jj = np.nonzero(mask)
    for i, j in zip(ii.tolist(), jj.tolist()):
        if not m[i + 1, j]:  # below
            add((i, j), (i + 1, j))
        if not m[i + 2, j + 1]:  # right
            add((i + 1, j), (i + 1, j + 1))
        if not m[i + 1, j + 2]:  # above
            add((i + 1, j + 1), (i, j + 1))
        if not m[i, j + 1]:  # left
            add((i, j + 1), (i, j))
    cycles = []
    while out_edges:
        start = min(out_edges)
        cyc = [start]
        prev = start
        cur = _pop(out_edges, start, None, None)
        while cur != start:
            cyc.append(cur)
            nxt = _pop(out_edges, cur, prev, cur)
            prev, cur = cur, nxt
        pts = [(xs[i], ys[j]) for i, j in cyc]
        pts = _drop_collinear(pts)
        cycles.append(pts)
    return cycles


def _pop(out_edges, v, prev, cur):
    outs = out_edges[v]
    if len(outs) == 1 or prev is None:
        nxt = outs.pop(0)
    else:
        din = (cur[0] - prev[0], cur[1] - prev[1])
        # prefer the left turn at pinch vertices
        def rank(w):
            d = (w[0] - v[0], w[1] - v[1])
            cr = din[0] * d[1] - din[1] * d[0]
            return -cr
        outs.sort(key=rank)
        nxt = outs.pop(0)
    if not outs:
        del out_edges[v]
    return nxt


def _drop_collinear(pts: list) -> list:
    out = []
    n = len(pts)
    for i in range(n):
        if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) != 0:
            out.append(pts[i])
    return out


def mask_polygon(mask: np.ndarray, grid: CellDecomposition) -> OrthoPolygon:
    """The orthogonal polygon occupied by a connected, hole-free cell mask."""
    cycles = trace_cycles(mask, grid.xs, grid.ys)
    if len(cycles) != 1:
        raise PolygonError("holes", f"cell set has {len(cycles)} boundary cycles")
    return make_polygon(cycles[0])


def mask_components(mask: np.ndarray, blocked_x: np.ndarray | None = None,
                    blocked_y: np.ndarray | None = None) -> list[np.ndarray]:
    """4-connected components of a cell mask.

    ``blocked_x[i, j]`` forbids crossing the vertical grid line between
    columns ``i-1`` and ``i`` inside row ``j`` (shape ``(nx+1, ny)``);
    ``blocked_y`` likewise for horizontal lines (shape ``(nx, ny+1)``).
    """
    nx, ny = mask.shape
    label = -np.ones(mask.shape, dtype=np.int64)
    comps = []
    for i0, j0 in zip(*np.nonzero(mask)):
        if label[i0, j0] >= 0:
            continue
        k = len(comps)
        stack = [(int(i0), int(j0))]
        label[i0, j0] = k
        cells = []
        while stack:
            i, j = stack.pop()
            cells.append((i, j))
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if not (0 <= a < nx and 0 <= b < ny) or not mask[a, b] or label[a, b] >= 0:
                    continue
                if di and blocked_x is not None and blocked_x[max(i, a), j]:
                    continue
                if dj and blocked_y is not None and blocked_y[i, max(j, b)]:
                    continue
                label[a, b] = k
                stack.append((a, b))
        comp = np.zeros(mask.shape, dtype=bool)
        ci, cj = zip(*cells)
        comp[list(ci), list(cj)] = True
        comps.append(comp)
    return comps


def column_runs(mask: np.ndarray) -> list[list[tuple[int, int]]]:
    """Per column, the maximal runs ``(j0, j1)`` of consecutive True cells (j1 exclusive)."""
    out = []
    for col in mask:
        runs = []
        j = 0
        n = len(col)
        while j < n:
            if col[j]:
                k = j
                while k < n and col[k]:
                    k += 1
                runs.append((j, k))
                j = k
            else:
                j += 1
        out.append(runs)
    return out


def is_monotone(poly_or_mask, axis: str, grid: CellDecomposition | None = None) -> bool:
    """Every line perpendicular to ``axis`` meets the polygon in at most one segment.

    ``axis='x'`` means x-monotone: vertical lines.
    """
    if isinstance(poly_or_mask, SimplePolygon):
        grid = refined_grid(poly_or_mask)
        mask = grid.inside
    else:
        mask = poly_or_mask
    a = axis.lower()
    if a not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    m = mask if a == "x" else mask.T
    return all(len(r) <= 1 for r in column_runs(m))
