"""Guard placement and coloring pipelines.

Every pipeline places guards by a fixed construction, computes the real
conflict graph, and only then repairs the intended coloring if it is not
proper. The claim report records which of the construction's promises held
on the instance at hand.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .decomposition import (
    Part,
    SnakeError,
    cutting,
    five_color_parts,
    heavy_path_iterations,
    is_snake,
    iteration_count,
    mounts_partition,
    path_to_snake,
    snake_split,
)
from .geometry import (
    CellDecomposition,
    Location,
    OrthoPolygon,
    SimplePolygon,
    column_runs,
    mask_polygon,
    point_in_polygon,
    refined_grid,
)
from .verify import (
    AREA_TOL,
    ConflictGraph,
    CoverageReport,
    conflict_graph,
    coverage_report,
    greedy_color,
    is_proper_coloring,
)
from .visibility import (
    WedgeSpec,
    angle_of,
    rect_visibility,
    rect_visible_cells,
    _prefix,
    visibility_polygon,
    wedge_visibility,
    region_from_cells,
    windows_of,
)


class GuardingError(ValueError):
    pass


@dataclass(eq=False)
class Guard:
    """A guard at ``position`` (internal doubled coordinates).

    ``orientation`` is the start angle of the wedge in degrees and ``width``
    its opening; both are ``None`` for full and rect guards.
    """

    position: tuple
    kind: str  # full | alpha | O | rect
    color: int = 1
    orientation: Optional[float] = None
    width: Optional[float] = None
    part: Optional[int] = None
    rule: str = ""
    start_vector: Optional[tuple] = field(default=None, repr=False)
    region: object = field(default=None, repr=False)


@dataclass
class Claim:
    id: str
    anchor: str
    held: bool
    detail: str = ""


@dataclass(eq=False)
class GuardPlan:
    polygon: SimplePolygon = field(repr=False)
    guards: list
    claims: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    conflict: Optional[ConflictGraph] = field(default=None, repr=False)
    coverage: Optional[CoverageReport] = field(default=None, repr=False)
    repairs: int = 0
    residue: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def colors_used(self) -> int:
        return len({g.color for g in self.guards})

    @property
    def all_held(self) -> bool:
        return all(c.held for c in self.claims)

    def claim(self, cid: str) -> Optional[Claim]:
        return next((c for c in self.claims if c.id == cid), None)


def region_for(poly: SimplePolygon, g: Guard, grid: Optional[CellDecomposition] = None):
    if g.kind == "full":
        return visibility_polygon(poly, g.position)
    if g.kind == "rect":
        return rect_visibility(poly, g.position, grid=grid)
    return wedge_visibility(poly, WedgeSpec(g.position, g.orientation, g.width, g.start_vector))


def log2c(n: int) -> int:
    return int(math.ceil(math.log2(n))) if n > 1 else 0


def _finish(plan: GuardPlan, semantics: str, order=None) -> GuardPlan:
    """Conflict graph, seeded repair, coverage."""
    gs = plan.guards
    cg = conflict_graph(gs, plan.polygon, semantics)
    seed = [g.color for g in gs]
    if order is None:
        order = range(len(gs))
    fixed = greedy_color(cg, list(order), seed)
    plan.repairs = sum(1 for a, b in zip(seed, fixed) if a != b)
    for g, c in zip(gs, fixed):
        g.color = c
    assert is_proper_coloring(cg, fixed)
    plan.conflict = cg
    plan.coverage = coverage_report(gs, plan.polygon)
    plan.stats.setdefault("guards", len(gs))
    plan.stats["conflicts"] = len(cg.edges)
    plan.stats["repairs"] = plan.repairs
    return plan


def _inside_claim(plan: GuardPlan) -> Claim:
    bad = [g.position for g in plan.guards
           if point_in_polygon(g.position, plan.polygon) is Location.OUTSIDE]
    return Claim("guards_inside", "every guard stands in the polygon", not bad,
                 f"{len(bad)} outside" if bad else "")


def _coverage_claim(plan: GuardPlan) -> Claim:
    cov = plan.coverage
    return Claim("coverage", "union of guard regions equals the polygon", cov.complete,
                 f"{cov.mode}; {len(cov.uncovered)} uncovered of {cov.samples}")


# ---------------------------------------------------------------------------
# alpha guards


def _rot90(v):
    return (-v[1], v[0])


def guard_alpha(poly: SimplePolygon, alpha: float, semantics: str = "area",
                timing: bool = False) -> GuardPlan:
    """Half-plane guards recursively placed on windows, then split into alpha wedges."""
    t0 = time.perf_counter()
    if not (0 < alpha <= 180):
        raise GuardingError(f"alpha must lie in (0, 180], got {alpha}")
    a, b = poly.vertices[0], poly.vertices[1]
    d0 = (b[0] - a[0], b[1] - a[1])
    first = (_mid(a[0], b[0]), _mid(a[1], b[1]))
    halves = []  # (apex, start vector, region, depth)
    queue = [(first, d0, 0, (a, b))]
    limit = 4 * poly.n
    diag = []
    seen = []
    import shapely
    pshape = shapely.Polygon([(float(x), float(y)) for x, y in poly.vertices])
    while queue:
        apex, sv, depth, gen = queue.pop(0)
        if depth > limit:
            diag.append(f"window recursion exceeded {limit} levels")
            break
        reg = wedge_visibility(poly, WedgeSpec(apex, angle_of(sv), 180, sv))
        halves.append((apex, sv, reg, depth))
        seen.append(reg.shape)
        for w in windows_of(reg, poly, exclude=gen):
            p, q = w.segment
            if p == q or _beyond_seen(p, q, seen, pshape):
                continue
            m = tuple(_mid(p[i], q[i]) for i in range(2))
            queue.append((m, (p[0] - q[0], p[1] - q[1]), depth + 1, (p, q)))
    k = int(180 // alpha) if alpha < 180 else 1
    rem = 180 - k * alpha
    guards = []
    for hi, (apex, sv, reg, _) in enumerate(halves):
        th = angle_of(sv)
        if alpha == 180:
            guards.append(Guard(apex, "alpha", 1, th, 180.0, part=hi, rule="half-plane",
                                start_vector=sv, region=reg))
            continue
        vecs = _wedge_vectors(sv, alpha, k)
        for i in range(k):
            g = Guard(apex, "alpha", 1, (th + i * alpha) % 360, float(alpha), part=hi,
                      rule="tile", start_vector=vecs[i])
            guards.append(g)
        if rem > 1e-9:
            g = Guard(apex, "alpha", 2, (th + 180 - alpha) % 360, float(alpha), part=hi,
                      rule="remainder", start_vector=_end_vector(sv, alpha))
            guards.append(g)
    for g in guards:
        if g.region is None:
            g.region = wedge_visibility(poly, WedgeSpec(g.position, g.orientation, g.width,
                                                        g.start_vector))
    plan = GuardPlan(poly, guards, stats={"n": poly.n, "half_plane_guards": len(halves),
                                          "alpha": alpha})
    _finish(plan, semantics)
    plan.claims = [
        Claim("alpha_two_colors", "alpha guards need at most two colors", plan.colors_used <= 2,
              f"{plan.colors_used} colors"),
        Claim("alpha_divisor_one_color", "one color when alpha divides 180",
              plan.colors_used == 1 if _divides(alpha) else True,
              "n/a" if not _divides(alpha) else f"{plan.colors_used} colors"),
        Claim("half_plane_recursion", "window recursion terminates", not diag, "; ".join(diag)),
        _inside_claim(plan),
        _coverage_claim(plan),
    ]
    plan.stats["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3) if timing else None
    return plan


def _beyond_seen(p, q, seen, pshape) -> bool:
    """True when the thin strip just past window pq (away from its region) is already seen."""
    import shapely
    px, py, qx, qy = float(p[0]), float(p[1]), float(q[0]), float(q[1])
    dx, dy = px - qx, py - qy
    L = (dx * dx + dy * dy) ** 0.5
    nx, ny = -dy / L, dx / L  # left of q->p: the unseen side
    eps = 1e-4 * max(1.0, L)
    probes = []
    for t in (0.05, 0.25, 0.5, 0.75, 0.95):
        x, y = qx + t * dx + eps * nx, qy + t * dy + eps * ny
        probes.append((x, y))
    pts = shapely.points(probes)
    inner = shapely.contains(pshape, pts)
    for k, pt in enumerate(pts):
        if inner[k] and not any(s.covers(pt) for s in seen):
            return False
    return True


def _divides(alpha) -> bool:
    r = 180 / alpha
    return abs(r - round(r)) < 1e-9


def _mid(u, v):
    s = u + v
    if isinstance(s, int):
        return s // 2 if s % 2 == 0 else Fraction(s, 2)
    if isinstance(s, Fraction):
        s = s / 2
        return int(s) if s.denominator == 1 else s
    return s / 2


def _wedge_vectors(sv, alpha, k):
    """Exact start vectors where the rotation is a multiple of 90 degrees."""
    out = []
    v = sv
    for i in range(k):
        rot = i * alpha
        if rot % 90 == 0:
            v = sv
            for _ in range(int(rot // 90)):
                v = _rot90(v)
            out.append(v)
        else:
            out.append(None)
    return out


def _end_vector(sv, alpha):
    rot = 180 - alpha
    if rot % 90 == 0:
        v = sv
        for _ in range(int(rot // 90)):
            v = _rot90(v)
        return v
    return None


# ---------------------------------------------------------------------------
# O guards in parts


def part_rectangles(mask: np.ndarray) -> list[tuple]:
    """Rectangles (i0, i1, j0, j1) in cell indices: columns for x-monotone masks, rows otherwise."""
    x_mono = all(len(r) <= 1 for r in column_runs(mask))
    y_mono = all(len(r) <= 1 for r in column_runs(mask.T))
    if x_mono or not y_mono:
        return _strips(mask)
    return [(j0, j1, i0, i1) for i0, i1, j0, j1 in _strips(mask.T)]


def _strips(mask) -> list[tuple]:
    runs = column_runs(mask)
    out = []
    open_: dict = {}
    for i, rs in enumerate(runs + [[]]):
        cur = {tuple(r) for r in rs}
        for r in list(open_):
            if r not in cur:
                out.append((open_.pop(r), i, r[0], r[1]))
        for r in rs:
            if tuple(r) not in open_:
                open_[tuple(r)] = i
    out.sort()
    return out


_CORNERS = (("bl", 0), ("br", 90), ("tr", 180), ("tl", 270))


def _open_length(inside, rect, grid, side) -> int:
    i0, i1, j0, j1 = rect
    xs, ys = grid.xs, grid.ys
    nx, ny = inside.shape
    if side == "b":
        if j0 == 0:
            return 0
        nb = inside[i0:i1, j0 - 1]
        return int(np.dot(np.diff(np.asarray(xs[i0:i1 + 1], dtype=np.int64)), nb))
    if side == "t":
        if j1 == ny:
            return 0
        nb = inside[i0:i1, j1]
        return int(np.dot(np.diff(np.asarray(xs[i0:i1 + 1], dtype=np.int64)), nb))
    if side == "l":
        if i0 == 0:
            return 0
        nb = inside[i0 - 1, j0:j1]
        return int(np.dot(np.diff(np.asarray(ys[j0:j1 + 1], dtype=np.int64)), nb))
    if i1 == nx:
        return 0
    nb = inside[i1, j0:j1]
    return int(np.dot(np.diff(np.asarray(ys[j0:j1 + 1], dtype=np.int64)), nb))


_FAR = {"bl": "tr", "br": "tl", "tr": "bl", "tl": "br"}


def rect_guard(rect, grid: CellDecomposition, forbid: Optional[np.ndarray] = None) -> Guard:
    """O-guard at the rectangle corner whose two far sides leak least."""
    i0, i1, j0, j1 = rect
    inside = grid.inside if forbid is None else forbid
    best = None
    for name, start in _CORNERS:
        far = _FAR[name]
        leak = _open_length(inside, rect, grid, far[0]) + _open_length(inside, rect, grid, far[1])
        x = grid.xs[i0] if name[1] == "l" else grid.xs[i1]
        y = grid.ys[j0] if name[0] == "b" else grid.ys[j1]
        key = (leak, start)
        if best is None or key < best[0]:
            best = (key, (x, y), start)
    _, pos, start = best
    return Guard(pos, "O", 1, float(start), 90.0, rule="corner")


def guard_part(part: Part, poly: Optional[SimplePolygon] = None, color: int = 1,
               placement: str = "star", avoid: Optional[list] = None) -> list[Guard]:
    """O-guards for one staircase or mount part, all sharing ``color``.

    ``star`` puts one or two back-to-back quadrants at a point the part is
    star-shaped from. A placement that cannot see out of the part wins;
    otherwise the one overlapping the ``avoid`` shapes (regions already
    holding this color) least. It falls back to ``steps`` (one guard per
    strip rectangle) when no such point exists.
    """
    if part.kind not in ("staircase", "mount", "residue", "snake", "mounts"):
        raise GuardingError(f"cannot guard part of kind {part.kind!r}")
    if placement not in ("star", "steps"):
        raise GuardingError(f"unknown placement {placement!r}")
    P = poly if poly is not None else part.polygon
    out = _star_guards(part, P, avoid or []) if placement == "star" else None
    if out is None:
        out = []
        for rect in part_rectangles(part.cells):
            g = rect_guard(rect, part.grid)
            g.region = region_for(P, g)
            out.append(g)
    for g in out:
        g.color = color
        g.part = part.id
    return out


# outward normals a quadrant starting at the key angle can cross
_FORWARD = {0: ("+x", "+y"), 90: ("-x", "+y"), 180: ("-x", "-y"), 270: ("+x", "-y")}
# flips bringing each quadrant's corner to the lower left of the mask
_FLIP = {0: (1, 1), 90: (-1, 1), 180: (-1, -1), 270: (1, -1)}


def _star_guards(part: Part, P, avoid: list) -> Optional[list]:
    g = part.grid
    ii, jj = np.nonzero(part.cells)
    if not len(ii):
        return None
    i0, i1, j0, j1 = ii.min(), ii.max() + 1, jj.min(), jj.max() + 1
    sub = part.cells[i0:i1, j0:j1]
    box = (g.xs[i0], g.ys[j0], g.xs[i1], g.ys[j1])
    open_len = _chord_lengths(part)
    cands = []
    corners = {0: (box[0], box[1]), 90: (box[2], box[1]), 180: (box[2], box[3]),
               270: (box[0], box[3])}
    for st, apex in corners.items():
        fx, fy = _FLIP[st]
        if _under_staircase(sub[::fx, ::fy]):
            cands.append((apex, (st,)))
    cands.extend(_base_apexes(part, box, sub))
    if not cands:
        return None
    scored = []
    for apex, starts in cands:
        fwd = {d for st in starts for d in _FORWARD[st]}
        scored.append((sum(open_len[d] for d in fwd), len(starts), apex, starts))
    scored.sort(key=lambda t: t[:2])
    if scored[0][0] == 0:
        return _quadrants(P, scored[0][2], scored[0][3])
    import shapely
    shape = shapely.Polygon([(float(x), float(y)) for x, y in part.polygon.vertices])
    near = shapely.union_all(avoid) if avoid else None
    best = None
    for _, n, apex, starts in scored:
        gs = _quadrants(P, apex, starts)
        if not gs:
            continue
        union = shapely.union_all([x.region.shape for x in gs])
        hit = union.intersection(near).area if near is not None else 0.0
        key = (hit > AREA_TOL, round(hit, 9), round(union.difference(shape).area, 9), n)
        if best is None or key < best[0]:
            best = (key, gs)
    return None if best is None else best[1]


def _quadrants(P, apex, starts) -> list:
    out = []
    for st in starts:
        gd = Guard(apex, "O", 1, float(st), 90.0, rule="star")
        gd.region = region_for(P, gd)
        if gd.region.shape.area > AREA_TOL:
            out.append(gd)
    return out


def _under_staircase(m: np.ndarray) -> bool:
    """Cells form the region under a non-increasing profile anchored at the lower left."""
    h = _prefix_heights(m)
    return h is not None and h[0] > 0 and bool((np.diff(h) <= 0).all())


def _prefix_heights(m: np.ndarray):
    """Per column, the run length from row 0, or None if some column is not such a run."""
    h = m.sum(axis=1)
    rows = np.arange(m.shape[1])[None, :]
    if not (m == (rows < h[:, None])).all():
        return None
    return h


def _base_apexes(part: Part, box, sub) -> list:
    """Points on the base under the peak of a unimodal profile, facing inward as a half-plane."""
    if part.base is None:
        return []
    (ax, ay), (bx, by) = part.base
    g = part.grid
    i0 = int(np.searchsorted(g.xs, box[0]))
    j0 = int(np.searchsorted(g.ys, box[1]))
    if ay == by:
        flip = ay != box[1]
        prof = sub[:, ::-1] if flip else sub
        coords, off = g.xs, i0
        facing = 270 if flip else 90
    else:
        flip = ax != box[0]
        prof = (sub[::-1, :] if flip else sub).T
        coords, off = g.ys, j0
        facing = 180 if flip else 0
    h = _prefix_heights(prof)
    if h is None or not h.all():
        return []
    top = h.max()
    peak = np.nonzero(h == top)[0]
    lo, hi = int(peak.min()), int(peak.max()) + 1
    if not ((np.diff(h[:lo + 1]) >= 0).all() and (np.diff(h[hi - 1:]) <= 0).all()):
        return []
    out = []
    for k in sorted({lo, hi}):
        c = coords[off + k]
        apex = (c, ay) if ay == by else (ax, c)
        out.append((apex, ((facing - 90) % 360, facing)))
    return out


def _chord_lengths(part: Part) -> dict:
    """Total length of the part's boundary inside the polygon, by outward normal."""
    g = part.grid
    c = part.cells
    other = g.inside & ~c
    dx = np.diff(np.asarray(g.xs, dtype=np.int64))
    dy = np.diff(np.asarray(g.ys, dtype=np.int64))
    out = {}
    px = c[:-1, :] & other[1:, :]
    mx = c[1:, :] & other[:-1, :]
    py = c[:, :-1] & other[:, 1:]
    my = c[:, 1:] & other[:, :-1]
    out["+x"] = int((px * dy[None, :]).sum())
    out["-x"] = int((mx * dy[None, :]).sum())
    out["+y"] = int((py * dx[:, None]).sum())
    out["-y"] = int((my * dx[:, None]).sum())
    return out


def _snake_guards(poly, grid, mask, colors, part_filter=None, held=None) -> tuple[list, list]:
    """Guards for the snake held in ``mask``; returns (guards, guarded parts).

    ``held`` maps colors to regions already using them and is extended in place.
    """
    sub = mask_polygon(mask, grid)
    parts = snake_split(sub, grid, mask)
    out = []
    used = []
    held = {} if held is None else held
    for p in parts:
        if part_filter is not None and not (p.cells & part_filter).any():
            continue
        c = colors[p.parity]
        gs = guard_part(p, poly, c, avoid=held.get(c))
        held.setdefault(c, []).extend(g.region.shape for g in gs)
        out.extend(gs)
        used.append(p)
    return out, used


def guard_snake(poly: OrthoPolygon, semantics: str = "area", timing: bool = False) -> GuardPlan:
    t0 = time.perf_counter()
    g = refined_grid(poly)
    chk = is_snake(poly, g)
    if not chk:
        raise GuardingError(f"not a snake polygon: {chk.reason}")
    guards, parts = _snake_guards(poly, g, g.inside, (1, 2))
    plan = GuardPlan(poly, guards, stats={"n": poly.n, "parts": len(parts)})
    intended = len({x.color for x in guards})
    _finish(plan, semantics)
    kinds_ok = all(p.kind in ("staircase", "mount") for p in parts)
    plan.claims = [
        Claim("snake_parts_kinds", "snake parts are staircases or mounts", kinds_ok,
              ",".join(p.kind for p in parts)),
        Claim("part_one_color", "each part is guarded with one color", plan.repairs == 0,
              f"{plan.repairs} repairs"),
        Claim("snake_two_colors", "a snake needs at most two colors", plan.colors_used <= 2,
              f"{plan.colors_used} colors (intended {intended})"),
        _inside_claim(plan),
        _coverage_claim(plan),
    ]
    plan.stats["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3) if timing else None
    return plan


# ---------------------------------------------------------------------------
# orthogonal O pipeline


def _pass_guards(poly, grid, orientation, color0, need=None, prefer=None):
    """Guard the heavy-path snakes of one orientation.

    With ``need`` only parts meeting those cells are guarded. A path that
    cannot be trimmed into a snake falls back to guarding its parts with
    alternating colors.
    """
    parts, tree = cutting(poly, orientation, grid)
    bundles = heavy_path_iterations(tree)
    covered = np.zeros(grid.inside.shape, dtype=bool)
    residues = np.zeros(grid.inside.shape, dtype=bool)
    guards = []
    errors = []
    held: dict = {}
    for bd in bundles:
        union = np.zeros(grid.inside.shape, dtype=bool)
        for k in bd.nodes:
            union |= parts[k].cells
        if need is not None and not (union & need).any():
            continue
        base = color0 + 2 * (bd.iteration - 1)
        colors = (base, base + 1)
        try:
            snake, res = path_to_snake(bd.nodes, parts, tree, prefer=prefer)
            bd.snake, bd.residues = snake, res
            gs, used = _snake_guards(poly, grid, snake, colors, part_filter=need, held=held)
        except SnakeError as exc:
            bd.error = str(exc)
            errors.append(str(exc))
            gs, used, res = [], [], []
            for pos, k in enumerate(bd.nodes):
                p = parts[k]
                if need is not None and not (p.cells & need).any():
                    continue
                c = colors[pos % 2]
                part_gs = guard_part(p, poly, c, avoid=held.get(c))
                held.setdefault(c, []).extend(g.region.shape for g in part_gs)
                gs.extend(part_gs)
                used.append(p)
        for r in res:
            residues |= r
        for x in gs:
            x.rule = f"{orientation}-iter{bd.iteration}"
        for p in used:
            covered |= p.cells
        guards.extend(gs)
    return dict(guards=guards, covered=covered, residues=residues,
                iterations=iteration_count(bundles), parts=len(parts), errors=errors)


def guard_ortho_O(poly: OrthoPolygon, allow_patch: bool = False, semantics: str = "area",
                  timing: bool = False) -> GuardPlan:
    """Heavy-path snakes of the h-cut tree, then of the v-cut tree for the leftover residues."""
    t0 = time.perf_counter()
    if not poly.orthogonal:
        raise GuardingError("the O pipeline needs an orthogonal polygon")
    grid = refined_grid(poly)
    h = _pass_guards(poly, grid, "h", 1)
    need = grid.inside & ~h["covered"]
    v_color0 = 1 + 2 * h["iterations"]
    v_iters = 0
    guards = list(h["guards"])
    covered = h["covered"].copy()
    v = None
    if need.any():
        v = _pass_guards(poly, grid, "v", v_color0, need=need, prefer=need)
        guards.extend(v["guards"])
        covered |= v["covered"]
        v_iters = v["iterations"]
    else:
        _, vt = cutting(poly, "v", grid)
        v_iters = iteration_count(heavy_path_iterations(vt))
    gaps = grid.inside & ~covered
    patched = 0
    if gaps.any() and allow_patch:
        top = max([x.color for x in guards], default=0)
        for comp_rect in part_rectangles(gaps):
            gd = rect_guard(comp_rect, grid)
            gd.color = top + 1
            gd.rule = "patch"
            gd.region = region_for(poly, gd)
            guards.append(gd)
            patched += 1
    plan = GuardPlan(poly, guards, residue=gaps,
                     stats={"n": poly.n, "parts_h": h["parts"],
                            "parts_v": v["parts"] if v else None,
                            "iterations_h": h["iterations"], "iterations_v": v_iters,
                            "patched": patched})
    _finish(plan, semantics)
    n = poly.n
    budget = 2 * (h["iterations"] + v_iters)
    errors = h["errors"] + (v["errors"] if v else [])
    ih_ok = h["iterations"] <= log2c(h["parts"]) + 1
    iv_parts = v["parts"] if v else None
    iv_ok = True if v is None else v_iters <= log2c(iv_parts) + 1
    plan.claims = [
        Claim("heavy_path_iterations", "logarithmically many heavy-path rounds", ih_ok and iv_ok,
              f"h {h['iterations']} of {h['parts']} parts; v {v_iters}"),
        Claim("paths_to_snakes", "each heavy path trims to a snake", not errors,
              "; ".join(errors[:3])),
        Claim("residues_recovered", "the second orientation covers the first one's residues",
              not gaps.any(), f"{int(gaps.sum())} uncovered cells" if gaps.any() else ""),
        Claim("ortho_O_budget", "two fresh colors per round",
              plan.colors_used <= budget, f"{plan.colors_used} colors, budget {budget}"),
        Claim("ortho_O_log_bound", "logarithmic color bound",
              plan.colors_used <= 4 * (log2c(n) + 1),
              f"{plan.colors_used} <= {4 * (log2c(n) + 1)}"),
        _inside_claim(plan),
        _coverage_claim(plan),
    ]
    plan.stats["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3) if timing else None
    return plan


# ---------------------------------------------------------------------------
# r-guards


@dataclass
class MountProfile:
    """Column heights of a mount measured from its base line."""

    horizontal: bool
    up: bool
    level: object  # coordinate of the base line
    coords: list  # column boundaries along the base
    heights: list  # ceiling distance from the base per column

    def point(self, along, dist):
        perp = self.level + dist if self.up else self.level - dist
        return (along, perp) if self.horizontal else (perp, along)


def mount_profile(cells: np.ndarray, grid: CellDecomposition, base: tuple) -> MountProfile:
    a, b = base
    horizontal = a[1] == b[1]
    m = cells if horizontal else cells.T
    xs, ys = (grid.xs, grid.ys) if horizontal else (grid.ys, grid.xs)
    c = a[1] if horizontal else a[0]
    k = ys.index(c)
    up = bool(m[:, k:].any())
    cols = [i for i in range(m.shape[0]) if m[i].any()]
    if not cols or cols != list(range(cols[0], cols[-1] + 1)):
        raise GuardingError("mount columns are not contiguous along the base")
    heights = []
    for i in cols:
        jj = np.nonzero(m[i])[0]
        heights.append(ys[jj.max() + 1] - c if up else c - ys[jj.min()])
    return MountProfile(horizontal, up, c, list(xs[cols[0]:cols[-1] + 2]), heights)


@dataclass
class CeilingNode:
    lo: int
    hi: int
    floor: object  # parent's height (distance from base)
    height: object
    parent: Optional[int] = None
    children: list = field(default_factory=list)


def ceiling_tree(heights: list) -> list[CeilingNode]:
    """Nested intervals of columns above each ceiling level (root first)."""
    nodes: list[CeilingNode] = []
    stack = [(0, len(heights), 0, None)]
    while stack:
        lo, hi, floor, par = stack.pop()
        h = min(heights[lo:hi])
        k = len(nodes)
        nodes.append(CeilingNode(lo, hi, floor, h, par))
        if par is not None:
            nodes[par].children.append(k)
        runs = []
        i = lo
        while i < hi:
            if heights[i] > h:
                j = i
                while j < hi and heights[j] > h:
                    j += 1
                runs.append((i, j))
                i = j
            else:
                i += 1
        for i, j in reversed(runs):
            stack.append((i, j, h, k))
    for nd in nodes:
        nd.children.sort(key=lambda c: nodes[c].lo)
    return nodes


def heavy_ceiling_paths(nodes: list[CeilingNode]) -> list[list[int]]:
    size = [1] * len(nodes)
    for k in range(len(nodes) - 1, -1, -1):
        for c in nodes[k].children:
            size[k] += size[c]
    heads = [0]
    paths = []
    while heads:
        h = heads.pop(0)
        path = [h]
        u = h
        while nodes[u].children:
            kids = nodes[u].children
            heavy = max(kids, key=lambda c: (size[c], -nodes[c].lo))
            heads.extend(c for c in kids if c != heavy)
            path.append(heavy)
            u = heavy
        paths.append(path)
    return paths


def _mount_guard_specs(cells, grid, base, placement="heavy") -> list[tuple]:
    """(position, rank) pairs; lower rank is colored first."""
    prof = mount_profile(cells, grid, base)
    xs = prof.coords
    out = []
    if placement == "ceiling":
        hs = prof.heights
        i = 0
        while i < len(hs):
            j = i
            while j < len(hs) and hs[j] == hs[i]:
                j += 1
            pos = prof.point(_mid(xs[i], xs[j]), hs[i] - 1)
            out.append((pos, (-hs[i], pos)))
            i = j
        return out
    nodes = ceiling_tree(prof.heights)
    depth = {0: 0}
    for k, nd in enumerate(nodes):
        for c in nd.children:
            depth[c] = depth[k] + 1
    for path in heavy_ceiling_paths(nodes):
        head, leaf = nodes[path[0]], nodes[path[-1]]
        pos = prof.point(_mid(xs[leaf.lo], xs[leaf.hi]), head.floor + 1)
        out.append((pos, (depth[path[0]], head.lo)))
    return out


def guard_mount_rect(part, poly: Optional[OrthoPolygon] = None,
                     grid: Optional[CellDecomposition] = None,
                     placement: str = "heavy") -> list[Guard]:
    """r-guards for a mount with locally greedy colors.

    ``placement='heavy'`` puts one guard per heavy path of the ceiling tree,
    low in the path's leaf column, so that only nested paths conflict.
    ``placement='ceiling'`` puts one guard just below every ceiling edge.
    """
    if isinstance(part, Part):
        cells, pgrid, base = part.cells, part.grid, part.base
        P = poly if poly is not None else part.polygon
    else:
        from .decomposition import is_mount
        P = part if poly is None else poly
        pgrid = refined_grid(part)
        ok, base = is_mount(part, pgrid)
        if not ok:
            raise GuardingError("polygon is not a mount")
        cells = pgrid.inside
    if base is None:
        raise GuardingError("part has no base edge")
    specs = _mount_guard_specs(cells, pgrid, base, placement)
    G = grid or refined_grid(P, [s[0] for s in specs])
    guards = [Guard(pos, "rect", 1, part=getattr(part, "id", 0), rule=placement)
              for pos, _ in specs]
    for gd in guards:
        gd.region = rect_visibility(P, gd.position, grid=G)
    _local_colors(guards, [s[1] for s in specs])
    return guards


def _local_colors(guards, ranks):
    cg = conflict_graph(guards)
    order = sorted(range(len(guards)), key=lambda k: ranks[k])
    for gd, c in zip(guards, greedy_color(cg, order)):
        gd.color = c


def guard_ortho_rect(poly: OrthoPolygon, semantics: str = "area", timing: bool = False) -> GuardPlan:
    """Mounts partition, five part colors, one shared r-color palette per part color."""
    t0 = time.perf_counter()
    if not poly.orthogonal:
        raise GuardingError("r-guards need an orthogonal polygon")
    mp = mounts_partition(poly)
    pcol = five_color_parts(mp)
    specs = {p.id: _mount_guard_specs(p.cells, p.grid, p.base) for p in mp.parts}
    G = refined_grid(poly, [sp[0] for ss in specs.values() for sp in ss])
    S = _prefix(G.inside)
    guards = []
    by_part = {}
    for p in mp.parts:
        gs = []
        for pos, _ in specs[p.id]:
            gd = Guard(pos, "rect", 1, part=p.id, rule=f"part-color-{pcol[p.id]}")
            cells = rect_visible_cells(G, G.xs.index(pos[0]), G.ys.index(pos[1]), S)
            gd.region = region_from_cells(cells, G, anchor=pos)
            gs.append(gd)
        _local_colors(gs, [sp[1] for sp in specs[p.id]])
        by_part[p.id] = gs
        guards.extend(gs)
    local_max = {}
    for pid, gs in by_part.items():
        c = pcol[pid]
        local_max[c] = max(local_max.get(c, 0), max((g.color for g in gs), default=0))
    offset = {}
    acc = 0
    for c in sorted(local_max):
        offset[c] = acc
        acc += local_max[c]
    for pid, gs in by_part.items():
        for g in gs:
            g.color += offset[pcol[pid]]
    plan = GuardPlan(poly, guards, stats={"n": poly.n, "parts": len(mp.parts),
                                          "part_colors": len(set(pcol.values())),
                                          "max_local_colors": max(local_max.values(), default=0)})
    _finish(plan, semantics)
    n = poly.n
    mx = max(local_max.values(), default=0)
    per_part = []
    for pid, gs in by_part.items():
        ce = len(gs)
        used = len({g.color for g in gs})
        if used > 1 + log2c(ce):
            per_part.append(f"part {pid}: {used} colors for {ce} ceiling edges")
    plan.claims = [
        Claim("window_segment", "every window is a single segment", mp.bent_windows == 0,
              f"{mp.bent_windows} bent windows"),
        Claim("five_part_colors", "five colors suffice for the parts", not mp.color_violations,
              f"{len(mp.color_violations)} collisions"),
        Claim("mount_log_colors", "a mount needs logarithmically many r-colors", not per_part,
              "; ".join(per_part[:3])),
        Claim("rect_palette_budget", "five palettes of mount colors",
              plan.colors_used <= 5 * mx, f"{plan.colors_used} <= 5*{mx}"),
        Claim("rect_log_bound", "logarithmic r-color bound",
              plan.colors_used <= 5 * (log2c(n) + 2), f"{plan.colors_used} <= {5 * (log2c(n) + 2)}"),
        _inside_claim(plan),
        _coverage_claim(plan),
    ]
    plan.stats["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3) if timing else None
    plan.partition = mp
    return plan
