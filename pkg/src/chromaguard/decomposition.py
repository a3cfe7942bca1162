"""Structural predicates and partitioning machines for orthogonal polygons.

All partitions live on the polygon's refined grid as boolean cell masks;
chords run along grid lines, so splitting a polygon is a connected-component
labelling with some cell sides blocked.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import (
    CellDecomposition,
    OrthoPolygon,
    PolygonError,
    column_runs,
    cut_edges,
    mask_components,
    mask_polygon,
    refined_grid,
)
from .visibility import Window, region_from_cells, sweep_cells, windows_of


class SnakeError(ValueError):
    """A path union could not be trimmed into a snake polygon."""


# ---------------------------------------------------------------------------
# masks and chords


def is_xy_monotone_mask(mask: np.ndarray) -> bool:
    return (all(len(r) <= 1 for r in column_runs(mask))
            and all(len(r) <= 1 for r in column_runs(mask.T)))


def _chord_blocks(grid: CellDecomposition, chords, axis: str):
    """Block arrays for ``mask_components`` from chords on grid lines."""
    nx, ny = grid.inside.shape
    bx = np.zeros((nx + 1, ny), dtype=bool)
    by = np.zeros((nx, ny + 1), dtype=bool)
    for a, b in chords:
        if a[1] == b[1]:
            k = grid.ys.index(a[1])
            i0, i1 = sorted((grid.xs.index(a[0]), grid.xs.index(b[0])))
            by[i0:i1, k] = True
        else:
            k = grid.xs.index(a[0])
            j0, j1 = sorted((grid.ys.index(a[1]), grid.ys.index(b[1])))
            bx[k, j0:j1] = True
    return bx, by


def _labels(comps, shape) -> np.ndarray:
    lab = -np.ones(shape, dtype=np.int64)
    for k, c in enumerate(comps):
        lab[c] = k
    return lab


def _cross_pairs(lab: np.ndarray, bx: np.ndarray, by: np.ndarray) -> dict:
    """Adjacent label pairs across blocked sides, with the shared unit sides."""
    pairs: dict = {}
    nx, ny = lab.shape
    ii, jj = np.nonzero(by[:, 1:-1])
    for i, j in zip(ii.tolist(), (jj + 1).tolist()):
        u, v = int(lab[i, j - 1]), int(lab[i, j])
        if u >= 0 and v >= 0 and u != v:
            pairs.setdefault((min(u, v), max(u, v)), []).append(("h", i, j))
    ii, jj = np.nonzero(bx[1:-1, :])
    for i, j in zip((ii + 1).tolist(), jj.tolist()):
        u, v = int(lab[i - 1, j]), int(lab[i, j])
        if u >= 0 and v >= 0 and u != v:
            pairs.setdefault((min(u, v), max(u, v)), []).append(("v", i, j))
    return pairs


def split_by_chords(grid: CellDecomposition, mask: np.ndarray, chords) -> list[np.ndarray]:
    bx, by = _chord_blocks(grid, chords, "")
    comps = mask_components(mask, bx, by)
    comps.sort(key=_mask_key)
    return comps


def _mask_key(m: np.ndarray):
    ii, jj = np.nonzero(m)
    # lowest row first, then leftmost
    return (int(jj.min()), int(ii[jj == jj.min()].min()))


def _polygon_of(mask, grid) -> OrthoPolygon:
    return mask_polygon(mask, grid)


# ---------------------------------------------------------------------------
# predicates


@dataclass(frozen=True)
class SnakeCheck:
    ok: bool
    orientation: Optional[str] = None  # "x" or "y": the monotone direction
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_snake(poly: OrthoPolygon, grid: Optional[CellDecomposition] = None) -> SnakeCheck:
    """Monotone in one axis, and every cross-axis cut edge, extended, splits the
    polygon into exactly three pieces at least one of which is xy-monotone."""
    g = grid or refined_grid(poly)
    mask = g.inside
    reasons = []
    for orient_, cut_axis in (("x", "h"), ("y", "v")):
        m = mask if orient_ == "x" else mask.T
        if not all(len(r) <= 1 for r in column_runs(m)):
            reasons.append(f"not {orient_}-monotone")
            continue
        ok = True
        for ce in cut_edges(poly, cut_axis):
            comps = split_by_chords(g, mask, [ce.extension])
            if len(comps) != 3:
                ok = False
                reasons.append(f"cut {ce.edge} yields {len(comps)} pieces")
                break
            if not any(is_xy_monotone_mask(c) for c in comps):
                ok = False
                reasons.append(f"cut {ce.edge} leaves no xy-monotone piece")
                break
        if ok:
            return SnakeCheck(True, orient_)
    return SnakeCheck(False, None, "; ".join(reasons))


def base_edges(poly: OrthoPolygon, grid: Optional[CellDecomposition] = None) -> list[tuple]:
    """Boundary edges whose perpendicular sweep covers the whole polygon."""
    g = grid or refined_grid(poly)
    total = g.inside.sum()
    out = []
    for a, b in poly.edges():
        cells = sweep_cells(g, a, b, None)
        if cells.sum() == total and (cells == g.inside).all():
            out.append((a, b))
    return out


def is_mount(poly: OrthoPolygon, grid: Optional[CellDecomposition] = None):
    """(True, base) when some base edge exists and the polygon is monotone
    perpendicular to it."""
    g = grid or refined_grid(poly)
    for a, b in base_edges(poly, g):
        m = g.inside if a[1] == b[1] else g.inside.T
        if all(len(r) <= 1 for r in column_runs(m)):
            return True, (a, b)
    return False, None


# ---------------------------------------------------------------------------
# parts


@dataclass(eq=False)
class Part:
    """A sub-polygon held as a cell mask on the parent's grid."""

    cells: np.ndarray = field(repr=False)
    grid: CellDecomposition = field(repr=False)
    kind: str = "residue"  # staircase | mount | mounts | snake | residue
    base: Optional[tuple] = None
    window: Optional[Window] = None
    id: int = 0
    parity: int = 0

    @property
    def polygon(self) -> OrthoPolygon:
        if not hasattr(self, "_poly"):
            self._poly = mask_polygon(self.cells, self.grid)
        return self._poly

    @property
    def area(self) -> int:
        return self.grid.area(self.cells)


def classify_part(mask: np.ndarray, grid: CellDecomposition) -> tuple[str, Optional[tuple]]:
    """'mount' (with base) or 'staircase' or 'residue'."""
    sub = _subgrid(mask, grid)
    poly = mask_polygon(mask, grid)
    ok, base = is_mount(poly, sub)
    if ok:
        return "mount", base
    if is_xy_monotone_mask(mask):
        return "staircase", None
    return "residue", None


def _subgrid(mask, grid) -> CellDecomposition:
    return CellDecomposition(grid.xs, grid.ys, mask.copy())


def snake_split(poly: OrthoPolygon, grid: Optional[CellDecomposition] = None,
                mask: Optional[np.ndarray] = None) -> list[Part]:
    """Extend every cross-axis cut edge of a snake into a full chord."""
    g = grid or refined_grid(poly)
    m = g.inside if mask is None else mask
    sub = _subgrid(m, g)
    chk = is_snake(poly, sub)
    if not chk:
        raise SnakeError(f"not a snake polygon: {chk.reason}")
    cut_axis = "h" if chk.orientation == "x" else "v"
    chords = [ce.extension for ce in cut_edges(poly, cut_axis)]
    comps = split_by_chords(g, m, chords)
    bx, by = _chord_blocks(g, chords, "")
    lab = _labels(comps, m.shape)
    pairs = _cross_pairs(lab, bx, by)
    adj = {k: [] for k in range(len(comps))}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    parity = _bfs_parity(adj, 0)
    parts = []
    for k, c in enumerate(comps):
        kind, base = classify_part(c, g)
        parts.append(Part(cells=c, grid=g, kind=kind, base=base, id=k, parity=parity[k]))
    return parts


def _bfs_parity(adj, root) -> dict:
    par = {root: 0}
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for v in sorted(adj[u]):
            if v not in par:
                par[v] = 1 - par[u]
                dq.append(v)
    for k in adj:
        par.setdefault(k, 0)
    return par


# ---------------------------------------------------------------------------
# cutting and duality trees


@dataclass(eq=False)
class DualityTree:
    orientation: str  # "h" or "v"
    nodes: list
    adj: dict
    root: int
    connectors: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.parent = {self.root: None}
        self.children = {k: [] for k in self.nodes}
        dq = deque([self.root])
        order = []
        while dq:
            u = dq.popleft()
            order.append(u)
            for v in sorted(self.adj[u]):
                if v not in self.parent:
                    self.parent[v] = u
                    self.children[u].append(v)
                    dq.append(v)
        if len(order) != len(self.nodes):
            raise ValueError("duality graph is not connected")
        n_edges = sum(len(v) for v in self.adj.values()) // 2
        if n_edges != len(self.nodes) - 1:
            raise ValueError("duality graph is not a tree")
        self.order = order
        size = {}
        for u in reversed(order):
            size[u] = 1 + sum(size[c] for c in self.children[u])
        self.size = size

    def __len__(self):
        return len(self.nodes)


def _root_cell(g: CellDecomposition, poly: OrthoPolygon, orientation: str):
    if orientation == "h":
        edges = [(min(a, b), max(a, b)) for a, b in poly.edges() if a[1] == b[1]]
        a, b = min(edges, key=lambda e: (e[0][1], e[0][0]))
        i = g.xs.index(a[0])
        j = g.ys.index(a[1])
        if g.inside[i, j]:
            return i, j
        return i, j - 1
    edges = [(min(a, b), max(a, b)) for a, b in poly.edges() if a[0] == b[0]]
    a, b = min(edges, key=lambda e: (e[0][0], e[0][1]))
    i = g.xs.index(a[0])
    j = g.ys.index(a[1])
    if g.inside[i, j]:
        return i, j
    return i - 1, j


def cutting(poly: OrthoPolygon, orientation: str,
            grid: Optional[CellDecomposition] = None) -> tuple[list[Part], DualityTree]:
    """Extend all h-cut (or v-cut) edges to chords; pieces plus their adjacency tree."""
    o = "h" if orientation.lower() in ("h", "horizontal") else "v"
    g = grid or refined_grid(poly)
    chords = [ce.extension for ce in cut_edges(poly, o)]
    comps = split_by_chords(g, g.inside, chords)
    bx, by = _chord_blocks(g, chords, "")
    lab = _labels(comps, g.inside.shape)
    pairs = _cross_pairs(lab, bx, by)
    adj = {k: [] for k in range(len(comps))}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    ri, rj = _root_cell(g, poly, o)
    root = int(lab[ri, rj])
    parts = [Part(cells=c, grid=g, kind="residue", id=k) for k, c in enumerate(comps)]
    tree = DualityTree(orientation=o, nodes=list(range(len(comps))), adj=adj, root=root,
                       connectors=pairs)
    return parts, tree


@dataclass(eq=False)
class PathBundle:
    iteration: int
    nodes: list
    snake: Optional[np.ndarray] = field(default=None, repr=False)
    residues: list = field(default_factory=list, repr=False)
    error: Optional[str] = None


def heavy_path_iterations(tree: DualityTree) -> list[PathBundle]:
    """Repeatedly strip a heavy root-to-leaf path from every remaining subtree."""
    out = []
    comps = [tree.root]
    it = 0
    removed = set()
    while comps:
        it += 1
        nxt = []
        for r in comps:
            path = [r]
            u = r
            while True:
                kids = [c for c in tree.children[u] if c not in removed]
                if not kids:
                    break
                u = max(kids, key=lambda c: (tree.size[c], -c))
                path.append(u)
            removed.update(path)
            out.append(PathBundle(iteration=it, nodes=path))
            for u in path:
                for c in tree.children[u]:
                    if c not in removed:
                        nxt.append(c)
        comps = sorted(set(nxt))
    return out


def iteration_count(bundles: list[PathBundle]) -> int:
    return max((b.iteration for b in bundles), default=0)


def path_to_snake(nodes: list, parts: list[Part], tree: DualityTree,
                  prefer: Optional[np.ndarray] = None) -> tuple[np.ndarray, list[np.ndarray]]:
    """Union of a root-to-leaf path, trimmed across cross-axis cut chords until a snake remains.

    Returns the snake cell mask and the removed residue masks. ``prefer``
    marks cells that should be kept when a choice exists.
    """
    g = parts[nodes[0]].grid
    U = np.zeros(g.inside.shape, dtype=bool)
    for k in nodes:
        U |= parts[k].cells
    conn_cells = np.zeros(U.shape, dtype=bool)
    for a, b in zip(nodes, nodes[1:]):
        for kind, i, j in tree.connectors.get((min(a, b), max(a, b)), []):
            if kind == "h":
                conn_cells[i, j - 1] = conn_cells[i, j] = True
            else:
                conn_cells[i - 1, j] = conn_cells[i, j] = True
    trim_axis = "v" if tree.orientation == "h" else "h"
    residues = []
    while True:
        try:
            poly = mask_polygon(U, g)
        except PolygonError as exc:
            raise SnakeError(f"path union is not a simple polygon: {exc}") from exc
        if is_snake(poly, _subgrid(U, g)):
            return U, residues
        ces = cut_edges(poly, trim_axis)
        drop = None
        for ce in ces:
            comps = split_by_chords(g, U, [ce.extension])
            cands = [c for c in comps if not (c & conn_cells).any()]
            if len(comps) < 2 or not cands:
                continue
            if prefer is not None:
                cands.sort(key=lambda c: (int((c & prefer).any()), g.area(c), _mask_key(c)))
            else:
                cands.sort(key=lambda c: (g.area(c), _mask_key(c)))
            drop = cands[0]
            break
        if drop is None:
            if not ces:
                break
            raise SnakeError(f"cannot trim across cut {ces[0].edge}: every piece carries a connector")
        residues.append(drop)
        U = U & ~drop
    poly = mask_polygon(U, g)
    chk = is_snake(poly, _subgrid(U, g))
    if not chk:
        raise SnakeError(f"trimmed path union is not a snake: {chk.reason}")
    return U, residues


# ---------------------------------------------------------------------------
# mounts partition


@dataclass(eq=False)
class MountsPartition:
    grid: CellDecomposition = field(repr=False)
    parts: list = field(default_factory=list)
    parent: dict = field(default_factory=dict)
    side: dict = field(default_factory=dict)  # part id -> left/right/above/below of its parent
    colors: dict = field(default_factory=dict)
    bent_windows: int = 0
    color_violations: list = field(default_factory=list)

    def children(self, k) -> list:
        return [c for c, p in self.parent.items() if p == k]

    def adjacency(self) -> dict:
        """Parts sharing a boundary piece of positive length."""
        lab = _labels([p.cells for p in self.parts], self.grid.inside.shape)
        adj = {p.id: set() for p in self.parts}
        for a, b in ((lab[:-1, :], lab[1:, :]), (lab[:, :-1], lab[:, 1:])):
            m = (a >= 0) & (b >= 0) & (a != b)
            for u, v in zip(a[m].tolist(), b[m].tolist()):
                adj[u].add(v)
                adj[v].add(u)
        return adj


def _lowest_edge(poly: OrthoPolygon):
    edges = [(min(a, b), max(a, b)) for a, b in poly.edges() if a[1] == b[1]]
    return min(edges, key=lambda e: (e[0][1], e[0][0]))


def _straight_runs(w: Window) -> list[tuple]:
    pts = list(w.points)
    if w.orientation in ("horizontal", "vertical"):
        return [(pts[0], pts[-1])]
    # split a bent piece into maximal axis-parallel runs
    xs = {}
    ys = {}
    for p in pts:
        xs.setdefault(p[0], []).append(p)
        ys.setdefault(p[1], []).append(p)
    runs = []
    for x, ps in xs.items():
        if len(ps) > 1:
            ps.sort()
            runs.append((ps[0], ps[-1]))
    for y, ps in ys.items():
        if len(ps) > 1:
            ps.sort()
            runs.append((ps[0], ps[-1]))
    return runs


def mounts_partition(poly: OrthoPolygon, grid: Optional[CellDecomposition] = None) -> MountsPartition:
    """Window recursion of orthogonal sweeps starting from the lowest edge."""
    g = grid or refined_grid(poly)
    covered = np.zeros(g.inside.shape, dtype=bool)
    mp = MountsPartition(grid=g)
    e = _lowest_edge(poly)
    root = sweep_cells(g, e[0], e[1], 1)
    covered |= root
    mp.parts.append(Part(cells=root, grid=g, kind="mounts", base=e, id=0))
    mp.parent[0] = None
    queue = deque([0])
    while queue:
        k = queue.popleft()
        part = mp.parts[k]
        region = region_from_cells(part.cells, g, anchor=part.base)
        wins = windows_of(region, poly, exclude=part.base, open_mask=g.inside & ~covered)
        for w in wins:
            if not w.is_segment:
                mp.bent_windows += 1
            for a, b in _straight_runs(w):
                for s in (1, -1):
                    cells = sweep_cells(g, a, b, s, within=~covered)
                    if not cells.any():
                        continue
                    for comp in split_by_chords(g, cells, []):
                        seg = _base_extent(comp, g, a, b, s)
                        kid = Part(cells=comp, grid=g, kind="mounts", base=seg, id=len(mp.parts),
                                   window=Window(segment=seg, orientation=w.orientation
                                                 if w.is_segment else _orient_of(a, b),
                                                 parent=k))
                        covered |= comp
                        mp.parts.append(kid)
                        mp.parent[kid.id] = k
                        mp.side[kid.id] = _side_name(a, b, s)
                        queue.append(kid.id)
    return mp


def _orient_of(a, b) -> str:
    return "horizontal" if a[1] == b[1] else "vertical"


def _side_name(a, b, s) -> str:
    if a[1] == b[1]:
        return "above" if s > 0 else "below"
    return "right" if s > 0 else "left"


def _base_extent(comp, g, a, b, s) -> tuple:
    if a[1] == b[1]:
        k = g.ys.index(a[1])
        row = k if s > 0 else k - 1
        ii = np.nonzero(comp[:, row])[0]
        return ((g.xs[ii.min()], a[1]), (g.xs[ii.max() + 1], a[1]))
    k = g.xs.index(a[0])
    col = k if s > 0 else k - 1
    jj = np.nonzero(comp[col, :])[0]
    return ((a[0], g.ys[jj.min()]), (a[0], g.ys[jj.max() + 1]))


# child color by (parent color, side); every entry differs from its parent
_SCHEME = {
    1: {"left": 2, "right": 3, "above": 4, "below": 5},
    2: {"left": 3, "right": 1, "above": 4, "below": 5},
    3: {"left": 1, "right": 2, "above": 4, "below": 5},
    4: {"left": 2, "right": 3, "above": 5, "below": 1},
    5: {"left": 2, "right": 3, "above": 1, "below": 4},
}


def five_color_parts(mp: MountsPartition) -> dict:
    """Color parts 1..5 by window side; fall back to the smallest free color on collision."""
    adj = mp.adjacency()
    colors = {}
    violations = []
    order = deque([0])
    seen = {0}
    while order:
        k = order.popleft()
        par = mp.parent.get(k)
        want = 1 if par is None else _SCHEME[colors[par]][mp.side[k]]
        taken = {colors[v] for v in adj[k] if v in colors}
        if want in taken:
            free = 1
            while free in taken:
                free += 1
            violations.append((k, want, free))
            want = free
        colors[k] = want
        for c in sorted(mp.children(k)):
            if c not in seen:
                seen.add(c)
                order.append(c)
    mp.colors = colors
    mp.color_violations = violations
    return colors
