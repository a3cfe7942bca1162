"""Conflict graphs, coverage certification, graph coloring and the small-instance oracle."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import CellDecomposition, SimplePolygon, refined_grid

AREA_TOL = 1e-7
# snap-rounding grid for unions; the default float overlay can lose slivers
UNION_GRID = 1e-9


def _region(x):
    return getattr(x, "region", x)


@dataclass(frozen=True)
class ConflictGraph:
    """Undirected incompatibility graph over guard indices ``0..n-1``."""

    n: int
    edges: frozenset
    semantics: str = "area"
    regions: tuple = field(default=(), repr=False, compare=False)

    @property
    def adjacency(self) -> list[set]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @classmethod
    def from_edges(cls, n: int, edges) -> "ConflictGraph":
        return cls(n, frozenset((min(u, v), max(u, v)) for u, v in edges if u != v))


def _same_grid(regions) -> Optional[CellDecomposition]:
    g0 = None
    for r in regions:
        if r.cells is None:
            return None
        if g0 is None:
            g0 = r.grid
        elif r.grid is not g0 and (r.grid.xs != g0.xs or r.grid.ys != g0.ys):
            return None
    return g0


def _cell_bbox(cells):
    ii = np.nonzero(cells.any(axis=1))[0]
    jj = np.nonzero(cells.any(axis=0))[0]
    if len(ii) == 0:
        return None
    return int(ii[0]), int(ii[-1]) + 1, int(jj[0]), int(jj[-1]) + 1


def conflict_graph(guards: Sequence, poly: Optional[SimplePolygon] = None,
                   semantics: str = "area") -> ConflictGraph:
    """Pairs of guards whose regions overlap (positive area, or any point with ``semantics='point'``)."""
    regions = [_region(g) for g in guards]
    n = len(regions)
    edges = set()
    grid = _same_grid(regions) if semantics == "area" else None
    if grid is not None:
        boxes = [_cell_bbox(r.cells) for r in regions]
        for u in range(n):
            bu = boxes[u]
            if bu is None:
                continue
            for v in range(u + 1, n):
                bv = boxes[v]
                if bv is None:
                    continue
                i0, i1 = max(bu[0], bv[0]), min(bu[1], bv[1])
                j0, j1 = max(bu[2], bv[2]), min(bu[3], bv[3])
                if i0 >= i1 or j0 >= j1:
                    continue
                if (regions[u].cells[i0:i1, j0:j1] & regions[v].cells[i0:i1, j0:j1]).any():
                    edges.add((u, v))
        return ConflictGraph(n, frozenset(edges), semantics, tuple(regions))
    import shapely
    shapes = [r.shape for r in regions]
    tree = shapely.STRtree(shapes)
    left, right = tree.query(shapes, predicate="intersects")
    for u, v in zip(left.tolist(), right.tolist()):
        if u >= v:
            continue
        if semantics == "point":
            edges.add((u, v))
        elif shapes[u].intersection(shapes[v]).area > AREA_TOL:
            edges.add((u, v))
    return ConflictGraph(n, frozenset(edges), semantics, tuple(regions))


@dataclass(frozen=True)
class ColoringCheck:
    ok: bool
    violation: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def is_proper_coloring(g: ConflictGraph, colors) -> ColoringCheck:
    col = _as_list(g, colors)
    for u, v in sorted(g.edges):
        if col[u] == col[v]:
            return ColoringCheck(False, (u, v, col[u]))
    return ColoringCheck(True)


def _as_list(g: ConflictGraph, colors) -> list:
    if isinstance(colors, dict):
        missing = [v for v in range(g.n) if v not in colors]
        col = [colors.get(v) for v in range(g.n)]
    else:
        col = list(colors)
        missing = [v for v in range(g.n) if v >= len(col) or col[v] is None]
    if missing:
        raise ValueError(f"no color assigned to vertices {missing[:5]}")
    return col


def greedy_color(g: ConflictGraph, order: Optional[Sequence[int]] = None,
                 seed=None) -> list[int]:
    """Seeded first-fit coloring: keep a seed color unless a colored neighbor already has it."""
    adj = g.adjacency
    order = list(range(g.n)) if order is None else list(order)
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    col = [0] * g.n
    for v in order:
        taken = {col[u] for u in adj[v] if col[u]}
        want = None
        if seed is not None:
            want = seed[v] if not isinstance(seed, dict) else seed.get(v)
        if want is None or want in taken:
            want = 1
            while want in taken:
                want += 1
        col[v] = want
    return col


def _greedy_clique(adj, n) -> list[int]:
    best = []
    for s in sorted(range(n), key=lambda v: -len(adj[v])):
        clique = [s]
        cand = set(adj[s])
        while cand:
            v = max(sorted(cand), key=lambda w: len(adj[w] & cand))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def exact_coloring(g: ConflictGraph, limit: int = 24) -> list:
    """Optimal coloring (colors 1..chi) by DSATUR branch and bound."""
    n = g.n
    if n > limit:
        raise ValueError(f"graph has {n} vertices; exact coloring limited to {limit}")
    if n == 0:
        return []
    adj = g.adjacency
    clique = _greedy_clique(adj, n)
    lower = len(clique)
    init = greedy_color(g, sorted(range(n), key=lambda v: -len(adj[v])))
    best = [len(set(init)), list(init)]
    if lower == best[0]:
        return best[1]
    col = [0] * n
    for k, v in enumerate(clique):
        col[v] = k + 1

    def pick():
        bv, bkey = -1, None
        for v in range(n):
            if col[v]:
                continue
            sat = len({col[u] for u in adj[v] if col[u]})
            key = (sat, len(adj[v]), -v)
            if bkey is None or key > bkey:
                bv, bkey = v, key
        return bv

    def rec(used: int):
        if used >= best[0]:
            return
        v = pick()
        if v < 0:
            best[0], best[1] = used, list(col)
            return
        taken = {col[u] for u in adj[v] if col[u]}
        for c in range(1, used + 2):
            if c in taken or c >= best[0]:
                continue
            col[v] = c
            rec(max(used, c))
            col[v] = 0
            if best[0] == lower:
                return

    rec(lower)
    return best[1]


def exact_chromatic(g: ConflictGraph, limit: int = 24) -> int:
    """Chromatic number."""
    return len(set(exact_coloring(g, limit)))


def k_colorable_bruteforce(g: ConflictGraph, k: int) -> bool:
    """Plain enumeration; used as an independent check on tiny graphs."""
    if g.n == 0:
        return True
    edges = sorted(g.edges)
    for assign in itertools.product(range(k), repeat=g.n):
        if all(assign[u] != assign[v] for u, v in edges):
            return True
    return False


# ---------------------------------------------------------------------------
# coverage


@dataclass
class CoverageReport:
    mode: str  # exact | sampled
    uncovered: list
    covered_fraction: float
    samples: int = 0

    @property
    def complete(self) -> bool:
        return not self.uncovered


def sample_points(poly: SimplePolygon) -> np.ndarray:
    """Corners, centers and edge midpoints of the coordinate grid, kept when inside (closed)."""
    import shapely
    xs = sorted({float(v[0]) for v in poly.vertices})
    ys = sorted({float(v[1]) for v in poly.vertices})
    xs2 = np.array(xs)
    ys2 = np.array(ys)
    mx = (xs2[:-1] + xs2[1:]) / 2
    my = (ys2[:-1] + ys2[1:]) / 2
    ax = np.concatenate([xs2, mx])
    ay = np.concatenate([ys2, my])
    X, Y = np.meshgrid(ax, ay, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    shp = shapely.Polygon([(float(x), float(y)) for x, y in poly.vertices])
    keep = shapely.intersects_xy(shp, pts[:, 0], pts[:, 1])
    # boundary points may miss by rounding; dwithin repairs that
    near = shapely.dwithin(shp.boundary, shapely.points(pts), 1e-9)
    return pts[keep | near]


def coverage_report(guards: Sequence, poly: SimplePolygon, eps: float = 1e-7) -> CoverageReport:
    regions = [_region(g) for g in guards]
    grid = _same_grid(regions) if regions else None
    if grid is not None:
        cov = np.zeros(grid.inside.shape, dtype=bool)
        for r in regions:
            cov |= r.cells
        gap = grid.inside & ~cov
        ii, jj = np.nonzero(gap)
        unc = [(grid.xs[i], grid.ys[j], grid.xs[i + 1], grid.ys[j + 1])
               for i, j in zip(ii.tolist(), jj.tolist())]
        total = grid.area()
        frac = 1.0 if total == 0 else 1 - grid.area(gap) / total
        return CoverageReport("exact", unc, frac, int(grid.inside.sum()))
    import shapely
    pts = sample_points(poly)
    if not regions:
        return CoverageReport("sampled", [tuple(p) for p in pts.tolist()], 0.0, len(pts))
    # test points region by region: a float overlay of many thin wedges can drop area
    P = shapely.points(pts)
    ok = np.zeros(len(pts), dtype=bool)
    for r in regions:
        ok |= shapely.dwithin(r.shape, P, eps)
    unc = [tuple(p) for p in pts[~ok].tolist()]
    frac = float(ok.mean()) if len(pts) else 1.0
    return CoverageReport("sampled", unc, frac, len(pts))


# ---------------------------------------------------------------------------
# oracle


@dataclass
class OracleResult:
    value: int
    witness: list  # guards of an optimal covering subset
    candidates: int
    subsets_checked: int


def _model_key(model):
    if isinstance(model, (tuple, list)):
        return model[0], float(model[1])
    m = str(model)
    if m.startswith("alpha"):
        return "alpha", float(m.split(":", 1)[1])
    return m, None


def default_candidates(poly: SimplePolygon, model) -> list:
    """Guards at refined-grid points inside the polygon, one per orientation that sees positive area."""
    from .guards import Guard, region_for
    from .geometry import contains
    kind, alpha = _model_key(model)
    xs = sorted({v[0] for v in poly.vertices})
    ys = sorted({v[1] for v in poly.vertices})
    pts = [(x, y) for x in xs for y in ys if contains(poly, (x, y))]
    out = []
    seen = set()
    for p in pts:
        if kind in ("full", "rect"):
            specs = [Guard(p, kind)]
        elif kind == "O":
            specs = [Guard(p, "O", orientation=s, width=90) for s in (0, 90, 180, 270)]
        elif kind == "alpha":
            k = int(math.ceil(360 / alpha - 1e-9))
            specs = [Guard(p, "alpha", orientation=(i * alpha) % 360, width=alpha) for i in range(k)]
        else:
            raise ValueError(f"unknown model {model!r}")
        for gd in specs:
            gd.region = region_for(poly, gd)
            if float(gd.region.area) <= AREA_TOL:
                continue
            key = _region_key(gd.region)
            if key in seen:
                continue
            seen.add(key)
            out.append(gd)
    return out


def _region_key(r) -> tuple:
    if r.cells is not None:
        return ("c", r.cells.tobytes(), r.cells.shape)
    return ("p", tuple(sorted((round(float(x), 9), round(float(y), 9)) for x, y in r.boundary)))


def oracle_chromatic_guarding(poly: SimplePolygon, model, candidates: Optional[list] = None,
                              max_candidates: int = 16, max_vertices: int = 12,
                              extra: Sequence = ()) -> OracleResult:
    """Minimum colors over covering subsets of a finite candidate guard set.

    The value is an upper bound on the unrestricted optimum. ``extra`` guards
    (for instance a pipeline's plan) join the candidates, which makes the
    value a lower bound for that plan's colors.
    """
    import shapely
    if poly.n > max_vertices:
        raise ValueError(f"oracle limited to {max_vertices} vertices, got {poly.n}")
    cands = default_candidates(poly, model) if candidates is None else list(candidates)
    if extra:
        from .guards import Guard, region_for
        seen = {_region_key(c.region) for c in cands}
        for e in extra:
            gd = Guard(e.position, e.kind, 1, e.orientation, e.width, rule=e.rule,
                       start_vector=e.start_vector)
            gd.region = e.region if e.region is not None else region_for(poly, gd)
            key = _region_key(gd.region)
            if float(gd.region.area) > AREA_TOL and key not in seen:
                seen.add(key)
                cands.append(gd)
    if len(cands) > max_candidates:
        raise ValueError(f"{len(cands)} candidates exceed the limit of {max_candidates}")
    kind, _ = _model_key(model)
    if kind == "rect":
        g = refined_grid(poly, [c.position for c in cands])
        from .visibility import rect_visibility
        for c in cands:
            c.region = rect_visibility(poly, c.position, grid=g)
        masks = []
        for c in cands:
            bits = 0
            for k in np.flatnonzero(c.region.cells[g.inside]).tolist():
                bits |= 1 << k
            masks.append(bits)
        full = (1 << int(g.inside.sum())) - 1
        exact_check = None
    else:
        pts = sample_points(poly)
        P = shapely.points(pts)
        masks = []
        for c in cands:
            ok = shapely.dwithin(c.region.shape, P, 1e-7)
            bits = 0
            for k in np.flatnonzero(ok).tolist():
                bits |= 1 << k
            masks.append(bits)
        full = (1 << len(pts)) - 1
        pshape = shapely.Polygon([(float(x), float(y)) for x, y in poly.vertices])

        def exact_check(sub):
            u = shapely.union_all([cands[i].region.shape for i in sub], grid_size=UNION_GRID)
            return pshape.difference(u).area <= AREA_TOL

    cg = conflict_graph(cands, poly)
    adj = cg.adjacency
    best = None
    best_sub = None
    covering: list = []
    checked = 0
    n = len(cands)
    for size in range(1, n + 1):
        if best is not None and best <= 1:
            break
        for sub in itertools.combinations(range(n), size):
            if any(set(c) <= set(sub) for c in covering):
                continue
            bits = 0
            for i in sub:
                bits |= masks[i]
            if bits != full:
                continue
            if exact_check is not None and not exact_check(sub):
                continue
            covering.append(sub)
            checked += 1
            idx = {v: k for k, v in enumerate(sub)}
            sg = ConflictGraph.from_edges(len(sub), [(idx[u], idx[v]) for u in sub for v in adj[u]
                                                     if v in idx])
            cols = exact_coloring(sg)
            chi = len(set(cols))
            if best is None or chi < best:
                best, best_sub, best_cols = chi, sub, cols
    if best is None:
        raise ValueError("no covering subset exists within the candidate set")
    witness = [cands[i] for i in best_sub]
    for gd, c in zip(witness, best_cols):
        gd.color = c
    return OracleResult(best, witness, n, checked)
