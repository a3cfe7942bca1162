"""Visibility regions: point, wedge-restricted, rectangular and orthogonal-from-edge.

Point and wedge visibility are computed by exact rotational ray casting: for
every vertex direction the first boundary exit just clockwise and just
counterclockwise of the ray is found with integer arithmetic. Rectangular
and orthogonal visibility are exact cell sets on a refined grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    CellDecomposition,
    Location,
    OrthoPolygon,
    Point,
    SimplePolygon,
    clear_denominators,
    contains,
    mask_components,
    on_segment,
    orient,
    point_in_polygon,
    refined_grid,
    shoelace2,
    trace_cycles,
)


class VisibilityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Region:
    """A visibility area inside a polygon.

    Diagonal regions carry an exact (or, for irrational wedge rays, float)
    boundary cycle. Orthogonal regions are cell sets on ``grid``; their
    boundary is traced on demand.
    """

    boundary: tuple
    kind: str  # "orthogonal" | "diagonal"
    anchor: object = None
    cells: Optional[np.ndarray] = field(default=None, repr=False)
    grid: Optional[CellDecomposition] = field(default=None, repr=False)

    @property
    def area(self):
        if self.cells is not None:
            return Fraction(self.grid.area(self.cells))
        s = shoelace2(self.boundary) if len(self.boundary) >= 3 else 0
        return s / 2 if isinstance(s, float) else Fraction(s) / 2

    def contains(self, q: Point) -> bool:
        if self.cells is not None:
            return _cells_contain(self.cells, self.grid, q)
        if len(self.boundary) < 3:
            return any(q == b for b in self.boundary) or (
                len(self.boundary) == 2 and on_segment(q, *self.boundary))
        return contains(SimplePolygon(tuple(self.boundary)), q)

    @cached_property
    def shape(self):
        """Float shapely geometry (used for area overlap tests and sampling)."""
        import shapely
        if self.cells is not None:
            polys = []
            for cyc in trace_cycles(self.cells, self.grid.xs, self.grid.ys):
                polys.append([(float(x), float(y)) for x, y in cyc])
            outer = [p for p in polys if _signed(p) > 0]
            holes = [p for p in polys if _signed(p) < 0]
            geoms = [shapely.Polygon(o) for o in outer]
            g = shapely.union_all(geoms) if geoms else shapely.Polygon()
            for h in holes:
                g = g.difference(shapely.Polygon(h))
            return g
        pts = [(float(x), float(y)) for x, y in self.boundary]
        if len(pts) < 3:
            return shapely.Polygon()
        return shapely.make_valid(shapely.Polygon(pts))

    def bbox(self) -> tuple:
        if self.cells is not None:
            ii, jj = np.nonzero(self.cells)
            if len(ii) == 0:
                return (0, 0, 0, 0)
            g = self.grid
            return g.xs[ii.min()], g.ys[jj.min()], g.xs[ii.max() + 1], g.ys[jj.max() + 1]
        xs = [p[0] for p in self.boundary]
        ys = [p[1] for p in self.boundary]
        return min(xs), min(ys), max(xs), max(ys)


def _signed(pts) -> float:
    return shoelace2(pts)


def _cells_contain(cells, grid, q) -> bool:
    x, y = q
    xs, ys = grid.xs, grid.ys
    if not (xs[0] <= x <= xs[-1] and ys[0] <= y <= ys[-1]):
        return False
    i_hi = int(np.searchsorted(xs, float(x), side="right")) - 1
    j_hi = int(np.searchsorted(ys, float(y), side="right")) - 1
    cand_i = {min(max(i_hi, 0), len(xs) - 2)}
    cand_j = {min(max(j_hi, 0), len(ys) - 2)}
    if 0 <= i_hi < len(xs) and xs[i_hi] == x:
        cand_i.add(max(i_hi - 1, 0))
    if 0 <= j_hi < len(ys) and ys[j_hi] == y:
        cand_j.add(max(j_hi - 1, 0))
    return any(cells[i, j] for i in cand_i for j in cand_j)


@dataclass(frozen=True)
class Window:
    """A maximal piece of a region boundary that does not lie on the polygon boundary."""

    segment: tuple
    orientation: str  # horizontal | vertical | diagonal
    parent: object = None
    points: tuple = ()

    @property
    def is_segment(self) -> bool:
        pts = self.points or self.segment
        return all(orient(pts[0], pts[-1], p) == 0 for p in pts)


@dataclass(frozen=True)
class WedgeSpec:
    """Closed angular wedge ``[start, start + width]`` (degrees, CCW) at ``apex``.

    ``start_vector`` optionally pins the start ray to an exact direction so
    that half-planes along arbitrary edges stay rational.
    """

    apex: Point
    start: float
    width: float
    start_vector: Optional[tuple] = None

    def __post_init__(self):
        if not (0 < self.width <= 180):
            raise ValueError(f"wedge width must lie in (0, 180], got {self.width}")

    @property
    def is_orthogonal(self) -> bool:
        return self.width == 90 and self.start % 90 == 0


AXIS_VECTORS = {0: (1, 0), 90: (0, 1), 180: (-1, 0), 270: (0, -1)}
# exact directions for the diagonals keep 45-degree wedges rational
DIAGONAL_VECTORS = {45: (1, 1), 135: (-1, 1), 225: (-1, -1), 315: (1, -1)}


def direction_vector(deg: float):
    d = deg % 360
    if d in AXIS_VECTORS:
        return AXIS_VECTORS[int(d)]
    if d in DIAGONAL_VECTORS:
        return DIAGONAL_VECTORS[int(d)]
    r = math.radians(d)
    return (math.cos(r), math.sin(r))


def angle_of(v) -> float:
    return math.degrees(math.atan2(float(v[1]), float(v[0]))) % 360


# ---------------------------------------------------------------------------
# ray extents


class _Frame:
    """Polygon and apex scaled to a common integer lattice."""

    def __init__(self, poly: SimplePolygon, p: Point):
        den = 1
        for c in p:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        self.den = den
        self.p = (int(p[0] * den), int(p[1] * den))
        v = poly.vertices
        big = den > 1 and max(abs(c) for q in v for c in q) * den > 2 ** 14
        dtype = object if big or any(not isinstance(c, int) for q in v for c in q) else np.int64
        arr = np.array([[int(x * den), int(y * den)] for x, y in v], dtype=dtype)
        self.a = arr
        self.b = np.roll(arr, -1, axis=0)
        self.dtype = dtype
        self.verts = [(int(x * den), int(y * den)) for x, y in v]

    def unscale(self, q):
        if self.den == 1:
            return (_nf(q[0]), _nf(q[1]))
        if isinstance(q[0], float) or isinstance(q[1], float):
            return (q[0] / self.den, q[1] / self.den)
        return (_nf(Fraction(q[0]) / self.den), _nf(Fraction(q[1]) / self.den))


def _nf(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def _sgn(x):
    return np.sign(x).astype(np.int64) if x.dtype != object else np.array(
        [[(e > 0) - (e < 0) for e in row] for row in x], dtype=np.int64)


def _fits_int64(fr: _Frame, dirs: list) -> bool:
    """Every product formed in the extent computation stays below 2**62."""
    px, py = fr.p
    c = max(max(abs(x - px), abs(y - py)) for x, y in fr.verts)
    d = max(max(abs(int(u)), abs(int(v))) for u, v in dirs)
    return max(4 * c * c, 4 * c * d, 2 * d * d) < 2 ** 62


def _ray_extents(fr: _Frame, dirs: list, exact: bool = True):
    """For each direction d, the ray parameters (t_cw, t_ccw) at which the
    perturbed rays leave the polygon; the exit point is ``p + t * d``.

    Exact directions must be integer vectors. Float directions fall back to
    float arithmetic.
    """
    px, py = fr.p
    if not dirs:
        return []
    if exact:
        dt = fr.dtype
        if dt == object and _fits_int64(fr, dirs):
            dt = np.int64
        D = np.array(dirs, dtype=dt)
        A, B = fr.a.astype(dt), fr.b.astype(dt)
    else:
        D = np.array(dirs, dtype=float)
        A, B = fr.a.astype(float), fr.b.astype(float)
    dx = D[:, 0:1]
    dy = D[:, 1:2]
    ax = A[None, :, 0] - px
    ay = A[None, :, 1] - py
    bx = B[None, :, 0] - px
    by = B[None, :, 1] - py
    ca = dx * ay - dy * ax
    cb = dx * by - dy * bx
    if exact:
        sa, sb = _sgn(ca), _sgn(cb)
    else:
        tol = 1e-9 * max(1.0, float(np.abs(A).max()))
        sa = np.where(np.abs(ca) <= tol, 0, np.sign(ca)).astype(np.int64)
        sb = np.where(np.abs(cb) <= tol, 0, np.sign(cb)).astype(np.int64)
    ex = bx - ax
    ey = by - ay
    num = ax * ey - ay * ex  # cross(a - p, b - a)
    den = dx * ey - dy * ex  # cross(d, b - a)
    dot_a = ax * dx + ay * dy
    dot_b = bx * dx + by * dy
    dd = dx * dx + dy * dy
    proper = (sa * sb) < 0
    # proper crossing parameter, positive only in front of the apex
    with np.errstate(divide="ignore", invalid="ignore"):
        if exact and dt == object:
            tp = np.array([[float(n) / float(d) if d != 0 else np.inf for n, d in zip(rn, rd)]
                           for rn, rd in zip(np.broadcast_to(num, den.shape), den)])
            ta = np.array([[float(n) / float(d[0]) for n in rn] for rn, d in
                           zip(np.broadcast_to(dot_a, ca.shape), dd)])
            tb = np.array([[float(n) / float(d[0]) for n in rn] for rn, d in
                           zip(np.broadcast_to(dot_b, ca.shape), dd)])
        else:
            tp = num.astype(float) / den.astype(float)
            ta = dot_a.astype(float) / dd.astype(float)
            tb = dot_b.astype(float) / dd.astype(float)
    out = []
    for side in (-1, 1):
        hit_p = proper & (tp > 0)
        hit_a = (sa == 0) & (sb == side) & (ta > 0)
        hit_b = (sb == 0) & (sa == side) & (tb > 0)
        t = np.full(ca.shape, np.inf)
        t = np.where(hit_p, tp, t)
        t = np.where(hit_a, np.minimum(t, ta), t)
        t = np.where(hit_b, np.minimum(t, tb), t)
        out.append((t, hit_p, hit_a, hit_b))
    results = []
    for k in range(len(dirs)):
        pair = []
        for t, hit_p, hit_a, hit_b in out:
            row = t[k]
            m = float(row.min())
            if not np.isfinite(m):
                pair.append(None)
                continue
            if not exact:
                pair.append(m)
                continue
            cands = np.nonzero(row <= m + 1e-9 * max(1.0, abs(m)))[0]
            best = None
            for e in cands.tolist():
                vals = []
                if hit_p[k, e]:
                    n_, d_ = int(num[0 if num.shape[0] == 1 else k, e]), int(den[k, e])
                    vals.append(Fraction(n_, d_))
                if hit_a[k, e]:
                    vals.append(Fraction(int(dot_a[k, e]), int(dd[k, 0])))
                if hit_b[k, e]:
                    vals.append(Fraction(int(dot_b[k, e]), int(dd[k, 0])))
                for v in vals:
                    if v > 0 and (best is None or v < best):
                        best = v
            pair.append(best)
        results.append(tuple(pair))
    return results


def _interior_cone(poly: SimplePolygon, p: Point):
    """Bounding directions (first, last) of the interior angle at a boundary point p,
    sweeping counterclockwise; None if p is strictly inside."""
    v = poly.vertices
    n = len(v)
    for i in range(n):
        if v[i] == p:
            w, u = v[(i + 1) % n], v[i - 1]
            return (w[0] - p[0], w[1] - p[1]), (u[0] - p[0], u[1] - p[1])
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        if on_segment(p, a, b):
            d = (b[0] - a[0], b[1] - a[1])
            return d, (-d[0], -d[1])
    return None


def _angle_key(d):
    """Sort key for exact CCW angular order starting at direction +x."""
    x, y = d
    upper = y > 0 or (y == 0 and x > 0)
    return (0 if upper else 1, _AngleCmp(d))


class _AngleCmp:
    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __lt__(self, other):
        a, b = self.d, other.d
        return a[0] * b[1] - a[1] * b[0] > 0

    def __eq__(self, other):
        a, b = self.d, other.d
        return a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0


def _in_open_cone(d, first, last) -> bool:
    """d strictly inside the CCW sweep from ``first`` to ``last``."""
    c1 = first[0] * d[1] - first[1] * d[0]
    c2 = d[0] * last[1] - d[1] * last[0]
    span = first[0] * last[1] - first[1] * last[0]
    if span > 0 or (span == 0 and first[0] * last[0] + first[1] * last[1] > 0):
        # convex (< 180) sweep
        return c1 > 0 and c2 > 0
    if span == 0:
        # exactly 180 degrees
        return c1 > 0
    # reflex sweep: everything except the closed convex complement
    return not (c1 <= 0 and c2 <= 0)


def _same_dir(d, e) -> bool:
    return d[0] * e[1] - d[1] * e[0] == 0 and d[0] * e[0] + d[1] * e[1] > 0


def _side_open(cone, d, side) -> bool:
    """Whether direction d nudged to ``side`` (+1 ccw, -1 cw) enters the interior."""
    if cone is None:
        return True
    first, last = cone
    if _in_open_cone(d, first, last):
        return True
    if _same_dir(d, first):
        return side > 0
    if _same_dir(d, last):
        return side < 0
    return False


def _reduce(d):
    g = gcd(int(d[0]), int(d[1]))
    return (int(d[0]) // g, int(d[1]) // g) if g else d


def _star_points(poly: SimplePolygon, p: Point, lo=None, hi=None):
    """Boundary of the visible region from p restricted to directions in the
    closed CCW range ``[lo, hi]`` (full turn if None), as a list of points."""
    if point_in_polygon(p, poly) is Location.OUTSIDE:
        raise VisibilityError(f"point {p} lies outside the polygon")
    fr = _Frame(poly, p)
    cone = _interior_cone(poly, p)
    dirs = {}
    for v in fr.verts:
        d = (v[0] - fr.p[0], v[1] - fr.p[1])
        if d == (0, 0):
            continue
        d = _reduce(d)
        dirs[d] = True
    dirs = list(dirs)
    exact_bounds = True
    if lo is not None:
        exact_bounds = all(isinstance(c, int) for c in lo + hi)
        if exact_bounds:
            lo_r, hi_r = _reduce(lo), _reduce(hi)
        else:
            lo_r, hi_r = lo, hi
        full180 = (lo_r[0] * hi_r[1] - lo_r[1] * hi_r[0]) == 0 and not _same_dir(lo_r, hi_r)
        inner = []
        for d in dirs:
            if exact_bounds and (_same_dir(d, lo_r) or _same_dir(d, hi_r)):
                continue
            if full180:
                if lo_r[0] * d[1] - lo_r[1] * d[0] > 0:
                    inner.append(d)
            elif _in_open_cone(d, lo_r, hi_r):
                inner.append(d)
        dirs = inner
        # angular order measured from the start ray
        dirs.sort(key=lambda d: _angle_key((d[0] * lo_r[0] + d[1] * lo_r[1],
                                            d[1] * lo_r[0] - d[0] * lo_r[1])))
    else:
        dirs.sort(key=_angle_key)
    ext = _ray_extents(fr, dirs)
    pts = []
    P0 = fr.p

    def at(d, t):
        if t is None or t == 0:
            return P0
        return (P0[0] + d[0] * t, P0[1] + d[1] * t)

    def side_t(d, t, side):
        if not _side_open(cone, d, side):
            return 0
        return t

    if lo is not None:
        if exact_bounds:
            (tcw, tccw), = _ray_extents(fr, [lo_r])
            start_pt = at(lo_r, side_t(lo_r, tccw, 1))
            (tcw2, tccw2), = _ray_extents(fr, [hi_r])
            end_pt = at(hi_r, side_t(hi_r, tcw2, -1))
        else:
            (tcw, tccw), = _ray_extents(fr, [lo_r], exact=False)
            start_pt = (P0[0] + lo_r[0] * (tccw or 0), P0[1] + lo_r[1] * (tccw or 0)) \
                if _side_open_f(cone, lo_r, 1) else P0
            (tcw2, tccw2), = _ray_extents(fr, [hi_r], exact=False)
            end_pt = (P0[0] + hi_r[0] * (tcw2 or 0), P0[1] + hi_r[1] * (tcw2 or 0)) \
                if _side_open_f(cone, hi_r, -1) else P0
        pts.append(P0)
        pts.append(start_pt)
    for d, (tcw, tccw) in zip(dirs, ext):
        pts.append(at(d, side_t(d, tcw, -1)))
        pts.append(at(d, side_t(d, tccw, 1)))
    if lo is not None:
        pts.append(end_pt)
    pts = [fr.unscale(q) for q in pts]
    return _clean(pts)


def _side_open_f(cone, d, side) -> bool:
    if cone is None:
        return True
    first, last = cone
    # float version of _side_open for irrational directions
    c1 = first[0] * d[1] - first[1] * d[0]
    c2 = d[0] * last[1] - d[1] * last[0]
    span = first[0] * last[1] - first[1] * last[0]
    eps = 1e-12
    if abs(c1) <= eps and first[0] * d[0] + first[1] * d[1] > 0:
        return side > 0
    if abs(c2) <= eps and last[0] * d[0] + last[1] * d[1] > 0:
        return side < 0
    if span > eps:
        return c1 > 0 and c2 > 0
    if abs(span) <= eps:
        return c1 > 0
    return not (c1 <= 0 and c2 <= 0)


def _clean(pts: list) -> list:
    """Drop repeated points, collinear vertices and zero-width spikes."""
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        for q in pts:
            if not out or out[-1] != q:
                out.append(q)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        # remove one vertex at a time so neighbours are judged against survivors
        keep = []
        for b in out:
            keep.append(b)
            while len(keep) >= 3 and _collinear(keep[-3], keep[-2], keep[-1]):
                del keep[-2]
                changed = True
        while len(keep) >= 3 and _collinear(keep[-2], keep[-1], keep[0]):
            keep.pop()
            changed = True
        while len(keep) >= 3 and _collinear(keep[-1], keep[0], keep[1]):
            keep.pop(0)
            changed = True
        pts = keep
    return pts


def _collinear(a, b, c) -> bool:
    v = orient(*clear_denominators(a, b, c))
    if isinstance(v, float):
        # compare the sine of the turn, so the test does not depend on position
        la = math.hypot(float(b[0] - a[0]), float(b[1] - a[1]))
        lc = math.hypot(float(c[0] - b[0]), float(c[1] - b[1]))
        scale = max(1.0, abs(float(b[0])) + abs(float(b[1])))
        if min(la, lc) <= 1e-12 * scale:
            return True
        return abs(v) <= 1e-9 * la * lc
    return v == 0


def visibility_polygon(poly: SimplePolygon, p: Point) -> Region:
    """Exact region of points q with segment pq inside the polygon."""
    pts = _star_points(poly, p)
    return Region(boundary=tuple(pts), kind="diagonal", anchor=p)


def wedge_visibility(poly: SimplePolygon, w: WedgeSpec) -> Region:
    """Visibility from the apex clipped to the closed wedge."""
    if w.start_vector is not None:
        lo = tuple(w.start_vector)
    else:
        lo = direction_vector(w.start)
    if w.width == 180:
        hi = (-lo[0], -lo[1])
    elif w.start_vector is not None and w.width == 90:
        hi = (-lo[1], lo[0])
    else:
        hi = direction_vector(w.start + w.width)
    if not all(isinstance(c, (int, Fraction)) for c in lo + hi):
        lo = tuple(float(c) for c in lo)
        hi = tuple(float(c) for c in hi)
    else:
        lo, hi = _int_dir(lo), _int_dir(hi)
    pts = _star_points(poly, w.apex, lo, hi)
    kind = "diagonal"
    return Region(boundary=tuple(pts), kind=kind, anchor=w)


def _int_dir(d):
    den = 1
    for c in d:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    return (int(d[0] * den), int(d[1] * den))


# ---------------------------------------------------------------------------
# cell-based regions


def _grid_for(poly: OrthoPolygon, pts, grid: Optional[CellDecomposition]):
    if grid is not None:
        for q in pts:
            if q[0] not in grid.xs or q[1] not in grid.ys:
                raise VisibilityError(f"grid does not contain coordinates of {q}")
        return grid
    return refined_grid(poly, pts)


def rect_visibility(poly: OrthoPolygon, p: Point,
                    grid: Optional[CellDecomposition] = None) -> Region:
    """Cells q such that the axis-aligned rectangle spanned by p and q lies in the polygon."""
    if not poly.orthogonal:
        raise VisibilityError("rectangular visibility needs an orthogonal polygon")
    if point_in_polygon(p, poly) is Location.OUTSIDE:
        raise VisibilityError(f"point {p} lies outside the polygon")
    g = _grid_for(poly, [p], grid)
    cells = rect_visible_cells(g, g.xs.index(p[0]), g.ys.index(p[1]))
    return Region(boundary=_outline(cells, g), kind="orthogonal", anchor=p, cells=cells, grid=g)


def _prefix(inside: np.ndarray) -> np.ndarray:
    S = np.zeros((inside.shape[0] + 1, inside.shape[1] + 1), dtype=np.int64)
    S[1:, 1:] = inside.astype(np.int64).cumsum(0).cumsum(1)
    return S


def rect_visible_cells(g: CellDecomposition, kx: int, ky: int, S=None) -> np.ndarray:
    """Vectorized r-visibility from the grid vertex ``(xs[kx], ys[ky])``."""
    if S is None:
        S = _prefix(g.inside)
    nx, ny = g.inside.shape
    i = np.arange(nx)
    j = np.arange(ny)
    i0 = np.where(i >= kx, kx, i)
    i1 = np.where(i >= kx, i, kx - 1)
    j0 = np.where(j >= ky, ky, j)
    j1 = np.where(j >= ky, j, ky - 1)
    I0, J0 = np.meshgrid(i0, j0, indexing="ij")
    I1, J1 = np.meshgrid(i1, j1, indexing="ij")
    tot = S[I1 + 1, J1 + 1] - S[I0, J1 + 1] - S[I1 + 1, J0] + S[I0, J0]
    size = (I1 - I0 + 1) * (J1 - J0 + 1)
    return tot == size


def ortho_visibility_from_edge(poly: OrthoPolygon, e: tuple, side: Optional[int] = None,
                               grid: Optional[CellDecomposition] = None,
                               within: Optional[np.ndarray] = None) -> Region:
    """Cells swept by perpendicular chords from the axis-parallel segment ``e``.

    ``side`` is +1 for the up/right sweep and -1 for down/left; ``None``
    sweeps every side the polygon occupies next to ``e``. ``within``
    restricts the sweep to a sub-mask (the uncovered remainder).
    """
    a, b = e
    if a[0] != b[0] and a[1] != b[1]:
        raise VisibilityError("orthogonal visibility needs an axis-parallel segment")
    g = _grid_for(poly, [a, b], grid)
    cells = sweep_cells(g, a, b, side, within)
    return Region(boundary=_outline(cells, g), kind="orthogonal", anchor=(a, b), cells=cells,
                  grid=g)


def sweep_cells(g: CellDecomposition, a: Point, b: Point, side: Optional[int],
                within: Optional[np.ndarray] = None) -> np.ndarray:
    inside = g.inside if within is None else (g.inside & within)
    horizontal = a[1] == b[1]
    m = inside if horizontal else inside.T
    xs, ys = (g.xs, g.ys) if horizontal else (g.ys, g.xs)
    lo, hi = sorted((a[0], b[0])) if horizontal else sorted((a[1], b[1]))
    c = a[1] if horizontal else a[0]
    i0, i1 = xs.index(lo), xs.index(hi)
    k = ys.index(c)
    out = np.zeros(m.shape, dtype=bool)
    sides = [side] if side is not None else [1, -1]
    for s in sides:
        if s > 0:
            block = m[i0:i1, k:]
            run = np.logical_and.accumulate(block, axis=1) if block.shape[1] else block
            out[i0:i1, k:] |= run
        else:
            block = m[i0:i1, :k][:, ::-1]
            run = np.logical_and.accumulate(block, axis=1) if block.shape[1] else block
            out[i0:i1, :k] |= run[:, ::-1]
    return out if horizontal else out.T


def _outline(cells: np.ndarray, g: CellDecomposition) -> tuple:
    cycles = trace_cycles(cells, g.xs, g.ys)
    if not cycles:
        return ()
    return tuple(max(cycles, key=shoelace2))


def windows_of(region: Region, poly: SimplePolygon, exclude: Optional[tuple] = None,
               open_mask: Optional[np.ndarray] = None) -> list[Window]:
    """Maximal connected boundary pieces of ``region`` that are not on the polygon boundary.

    ``exclude`` is a generating segment (a region's own base or window line)
    whose collinear pieces are not reported. For cell regions, ``open_mask``
    limits windows to sides facing cells of that mask.
    """
    if region.cells is not None:
        return _cell_windows(region, exclude, open_mask)
    return _poly_windows(region, poly, exclude)


def _cell_windows(region: Region, exclude, open_mask) -> list[Window]:
    g = region.grid
    cells = region.cells
    other = g.inside & ~cells
    if open_mask is not None:
        other &= open_mask
    nx, ny = cells.shape
    units = []  # ((i, j), (i2, j2)) in grid-vertex index space
    # vertical sides between column i-1 and i
    left = np.zeros((nx + 1, ny), dtype=bool)
    left[1:-1] = (cells[:-1] & other[1:]) | (cells[1:] & other[:-1])
    for i, j in zip(*np.nonzero(left)):
        units.append(((int(i), int(j)), (int(i), int(j) + 1)))
    low = np.zeros((nx, ny + 1), dtype=bool)
    low[:, 1:-1] = (cells[:, :-1] & other[:, 1:]) | (cells[:, 1:] & other[:, :-1])
    for i, j in zip(*np.nonzero(low)):
        units.append(((int(i), int(j)), (int(i) + 1, int(j))))
    if exclude is not None:
        ea, eb = exclude
        units = [u for u in units if not _on_anchor(u, g, ea, eb)]
    return _chain_units(units, g, region.anchor)


def _on_anchor(u, g, ea, eb) -> bool:
    p = (g.xs[u[0][0]], g.ys[u[0][1]])
    q = (g.xs[u[1][0]], g.ys[u[1][1]])
    return on_segment(p, ea, eb) and on_segment(q, ea, eb)


def _chain_units(units, g, parent) -> list[Window]:
    adj: dict = {}
    for k, (p, q) in enumerate(units):
        adj.setdefault(p, []).append(k)
        adj.setdefault(q, []).append(k)
    seen = [False] * len(units)
    out = []
    for k0 in range(len(units)):
        if seen[k0]:
            continue
        stack = [k0]
        seen[k0] = True
        comp = []
        while stack:
            k = stack.pop()
            comp.append(k)
            for v in units[k]:
                for k2 in adj[v]:
                    if not seen[k2]:
                        seen[k2] = True
                        stack.append(k2)
        verts = sorted({v for k in comp for v in units[k]})
        pts = tuple((g.xs[i], g.ys[j]) for i, j in verts)
        xs = {p[0] for p in pts}
        ys = {p[1] for p in pts}
        if len(ys) == 1:
            orientation = "horizontal"
        elif len(xs) == 1:
            orientation = "vertical"
        else:
            orientation = "bent"
        seg = (pts[0], pts[-1])
        out.append(Window(segment=seg, orientation=orientation, parent=parent, points=pts))
    out.sort(key=lambda w: w.segment)
    return out


def _poly_windows(region: Region, poly: SimplePolygon, exclude) -> list[Window]:
    pts = list(region.boundary)
    n = len(pts)
    if n < 3:
        return []
    pieces = []  # (a, b, is_window)
    verts = poly.vertices
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if exclude is not None and _within(a, b, exclude):
            pieces.append((a, b, False))
            continue
        cuts = [a, b]
        extra = list(exclude) if exclude is not None else []
        for v in list(verts) + extra:
            if v != a and v != b and v not in cuts and _on_seg(v, a, b):
                cuts.append(v)
        cuts.sort(key=lambda q: (q[0] - a[0]) ** 2 + (q[1] - a[1]) ** 2)
        for c, d in zip(cuts, cuts[1:]):
            if exclude is not None and _within(c, d, exclude):
                pieces.append((c, d, False))
                continue
            m = ((c[0] + d[0]) / 2, (c[1] + d[1]) / 2)
            if isinstance(m[0], float) or isinstance(m[1], float):
                on_b = _near_boundary_f(m, poly)
            else:
                on_b = point_in_polygon(m, poly) is Location.BOUNDARY
            pieces.append((c, d, not on_b))
    # rotate so that we start at a non-window piece
    if all(w for _, _, w in pieces):
        return [Window(segment=(pieces[0][0], pieces[0][0]), orientation="diagonal",
                       parent=region.anchor, points=tuple(p[0] for p in pieces))]
    k = next(i for i, pc in enumerate(pieces) if not pc[2])
    pieces = pieces[k:] + pieces[:k]
    out = []
    cur = []
    for c, d, w in pieces + [(None, None, False)]:
        if w and cur and _touches_boundary(c, poly):
            # a window meets the boundary at a single point there: two windows
            out.append(_window(cur, region))
            cur = []
        if w:
            if not cur:
                cur = [c]
            cur.append(d)
        elif cur:
            out.append(_window(cur, region))
            cur = []
    return out


def _window(cur, region) -> Window:
    seg = (cur[0], cur[-1])
    if seg[0][1] == seg[1][1]:
        o = "horizontal"
    elif seg[0][0] == seg[1][0]:
        o = "vertical"
    else:
        o = "diagonal"
    return Window(segment=seg, orientation=o, parent=region.anchor, points=tuple(cur))


def _touches_boundary(c, poly) -> bool:
    if all(isinstance(v, (int, Fraction)) for v in c):
        return point_in_polygon(c, poly) is Location.BOUNDARY
    return _near_boundary_f(tuple(float(v) for v in c), poly)


def _within(a, b, seg) -> bool:
    """Both ends of ab lie on the closed segment ``seg``."""
    p, q = seg
    return _on_seg(a, p, q) and _on_seg(b, p, q)


def _on_seg(x, p, q) -> bool:
    if not _collinear(p, q, x):
        return False
    tol = 1e-9 * max(1.0, abs(float(p[0])) + abs(float(p[1])))
    if all(isinstance(c, (int, Fraction)) for c in (*x, *p, *q)):
        tol = 0
    return (min(p[0], q[0]) - tol <= x[0] <= max(p[0], q[0]) + tol
            and min(p[1], q[1]) - tol <= x[1] <= max(p[1], q[1]) + tol)


def _near_boundary_f(m, poly) -> bool:
    x, y = m
    for a, b in poly.edges():
        ax, ay, bx, by = map(float, (a[0], a[1], b[0], b[1]))
        ex, ey = bx - ax, by - ay
        L2 = ex * ex + ey * ey
        t = ((x - ax) * ex + (y - ay) * ey) / L2
        if -1e-12 <= t <= 1 + 1e-12:
            cx, cy = ax + t * ex, ay + t * ey
            if (cx - x) ** 2 + (cy - y) ** 2 <= 1e-16 * max(1.0, L2):
                return True
    return False


def region_from_cells(cells: np.ndarray, grid: CellDecomposition, anchor=None) -> Region:
    return Region(boundary=_outline(cells, grid), kind="orthogonal", anchor=anchor, cells=cells,
                  grid=grid)


def interior_side(poly: OrthoPolygon, a: Point, b: Point, grid: CellDecomposition) -> list[int]:
    """Sides (+1 up/right, -1 down/left) of the segment ab that hold polygon cells."""
    horizontal = a[1] == b[1]
    out = []
    for s in (1, -1):
        cells = sweep_cells(grid, a, b, s)
        if cells.any():
            out.append(s)
    return out


__all__ = [
    "Region", "Window", "WedgeSpec", "VisibilityError", "visibility_polygon", "wedge_visibility",
    "rect_visibility", "ortho_visibility_from_edge", "windows_of", "sweep_cells",
    "rect_visible_cells", "region_from_cells", "direction_vector", "angle_of", "interior_side",
    "mask_components",
]
