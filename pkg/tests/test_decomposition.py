from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromaguard import (
    DualityTree,
    base_edges,
    cutting,
    five_color_parts,
    heavy_path_iterations,
    is_mount,
    is_snake,
    mounts_partition,
    path_to_snake,
    refined_grid,
    snake_split,
    validate_polygon,
)
from chromaguard.decomposition import SnakeError, is_xy_monotone_mask, iteration_count
from chromaguard.generators import generate
from chromaguard.visibility import sweep_cells
from conftest import D, poly


def rect_cells(part):
    """Bounding box of a part in user units, for parts known to be rectangles."""
    g = part.grid
    ii, jj = np.nonzero(part.cells)
    box = (g.xs[ii.min()], g.ys[jj.min()], g.xs[ii.max() + 1], g.ys[jj.max() + 1])
    return tuple(v // 2 for v in box)


def assert_partition(parts, grid):
    total = np.zeros(grid.inside.shape, dtype=int)
    for p in parts:
        total += p.cells.astype(int)
    assert (total == grid.inside.astype(int)).all()
    assert sum(p.area for p in parts) == grid.area()


def test_is_snake_examples():
    assert is_snake(poly("SQ4"))
    assert is_snake(poly("H12"))
    assert is_snake(poly("M8"))


def test_plus_is_snake_under_the_cut_rule():
    # no cut edge exists at all, and it is x-monotone
    chk = is_snake(poly("PLUS"))
    assert chk.ok and chk.orientation == "x"


def test_non_monotone_is_not_snake():
    spiral = validate_polygon([(0, 0), (8, 0), (8, 8), (2, 8), (2, 4), (5, 4), (5, 6), (6, 6),
                               (6, 2), (0, 2)])
    chk = is_snake(spiral)
    assert not chk and "monotone" in chk.reason


def test_base_edges_examples():
    assert len(base_edges(poly("SQ4"))) == 4
    L = set(base_edges(poly("L6")))
    assert L == {(D((0, 0)), D((4, 0))), (D((0, 4)), D((0, 0)))}
    assert base_edges(poly("H12")) == []


def test_is_mount_examples():
    ok, base = is_mount(poly("M8"))
    assert ok and base == (D((0, 0)), D((6, 0)))
    assert is_mount(poly("L6"))[0]
    assert not is_mount(poly("H12"))[0]


def test_snake_split_examples():
    (sq,) = snake_split(poly("SQ4"))
    assert sq.kind == "mount"
    parts = snake_split(poly("H12"))
    assert sorted(rect_cells(p) for p in parts) == sorted(
        [(0, 0, 2, 2), (4, 0, 6, 2), (0, 2, 6, 4), (0, 4, 2, 6), (4, 4, 6, 6)])
    mid = next(p for p in parts if rect_cells(p) == (0, 2, 6, 4))
    assert all(p.parity != mid.parity for p in parts if p is not mid)
    parts = snake_split(poly("M8"))
    assert sorted(rect_cells(p) for p in parts) == [(0, 0, 6, 2), (0, 2, 2, 4), (4, 2, 6, 4)]


def test_snake_split_rejects_non_snake():
    spiral = validate_polygon([(0, 0), (8, 0), (8, 8), (2, 8), (2, 4), (5, 4), (5, 6), (6, 6),
                               (6, 2), (0, 2)])
    with pytest.raises(SnakeError):
        snake_split(spiral)


def test_cutting_examples():
    parts, tree = cutting(poly("SQ4"), "h")
    assert len(parts) == 1 and len(tree) == 1
    parts, tree = cutting(poly("H12"), "h")
    assert len(parts) == 5
    assert rect_cells(parts[tree.root]) == (0, 0, 2, 2)
    mid = next(p.id for p in parts if rect_cells(p) == (0, 2, 6, 4))
    assert sorted(tree.adj[mid]) == sorted(k for k in range(5) if k != mid)
    parts, tree = cutting(poly("H12"), "v")
    assert len(parts) == 1


def test_heavy_paths_examples():
    _, tree = cutting(poly("SQ4"), "h")
    b = heavy_path_iterations(tree)
    assert len(b) == 1 and iteration_count(b) == 1
    parts, tree = cutting(poly("H12"), "h")
    b = heavy_path_iterations(tree)
    assert iteration_count(b) == 2
    assert len(b[0].nodes) == 3 and [len(x.nodes) for x in b[1:]] == [1, 1]
    path8 = DualityTree("h", list(range(8)), {k: [v for v in (k - 1, k + 1) if 0 <= v < 8]
                                              for k in range(8)}, 0)
    assert iteration_count(heavy_path_iterations(path8)) == 1


def test_duality_tree_rejects_cycles():
    with pytest.raises(ValueError):
        DualityTree("h", [0, 1, 2], {0: [1, 2], 1: [0, 2], 2: [0, 1]}, 0)


def random_tree(n, rng):
    adj = {0: []}
    for k in range(1, n):
        p = rng.randrange(k) if rng.random() < 0.5 else max(0, k - 1 - rng.randrange(3))
        adj[k] = [p]
        adj[p].append(k)
    return DualityTree("h", list(range(n)), adj, 0)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 64, 500, 2000, 10_000])
def test_heavy_path_iteration_bound(n):
    rng = random.Random(n)
    for _ in range(5 if n < 5000 else 1):
        tree = random_tree(n, rng)
        b = heavy_path_iterations(tree)
        assert sorted(v for x in b for v in x.nodes) == list(range(n))
        assert iteration_count(b) <= math.ceil(math.log2(n)) + 1 if n > 1 else 1


def test_heavy_path_on_complete_binary_tree():
    n = 2 ** 10 - 1
    adj = {k: [] for k in range(n)}
    for k in range(1, n):
        adj[k].append((k - 1) // 2)
        adj[(k - 1) // 2].append(k)
    b = heavy_path_iterations(DualityTree("h", list(range(n)), adj, 0))
    assert iteration_count(b) <= math.ceil(math.log2(n)) + 1


def test_path_to_snake_examples():
    parts, tree = cutting(poly("H12"), "h")
    ids = {rect_cells(p): p.id for p in parts}
    path = [ids[(0, 0, 2, 2)], ids[(0, 2, 6, 4)], ids[(4, 4, 6, 6)]]
    U, res = path_to_snake(path, parts, tree)
    assert res == []
    assert U.sum() == sum(parts[k].cells.sum() for k in path)
    parts, tree = cutting(poly("SQ4"), "h")
    U, res = path_to_snake([0], parts, tree)
    assert res == [] and (U == parts[0].cells).all()


ARM24 = [(0, 3), (1, 3), (1, 1), (2, 1), (2, 2), (3, 2), (3, 1), (4, 1), (4, 0), (5, 0), (5, 2),
         (4, 2), (4, 3), (5, 3), (5, 4), (4, 4), (4, 5), (3, 5), (3, 6), (2, 6), (2, 5), (1, 5),
         (1, 4), (0, 4)]


def test_path_to_snake_trims_side_arm():
    from chromaguard.geometry import mask_polygon
    P = validate_polygon(ARM24)
    parts, tree = cutting(P, "h")
    (first,) = [b for b in heavy_path_iterations(tree) if b.iteration == 1]
    U, res = path_to_snake(first.nodes, parts, tree)
    g = parts[0].grid
    assert is_snake(mask_polygon(U, g))
    assert [mask_polygon(r, g).user_vertices() for r in res] == [[[4, 3], [5, 3], [5, 4], [4, 4]]]
    whole = np.zeros_like(U)
    for k in first.nodes:
        whole |= parts[k].cells
    rec = U.copy()
    for r in res:
        assert not (rec & r).any()
        rec |= r
    assert (rec == whole).all()


def test_mounts_partition_examples():
    assert len(mounts_partition(poly("SQ4")).parts) == 1
    assert len(mounts_partition(poly("L6")).parts) == 1
    mp = mounts_partition(poly("H12"))
    boxes = [rect_cells(p) for p in mp.parts]
    assert boxes == [(0, 0, 2, 6), (2, 2, 6, 4), (4, 0, 6, 2), (4, 4, 6, 6)]
    assert_partition(mp.parts, mp.grid)


def test_five_color_examples():
    assert five_color_parts(mounts_partition(poly("SQ4"))) == {0: 1}
    mp = mounts_partition(poly("H12"))
    cols = five_color_parts(mp)
    named = {rect_cells(p): cols[p.id] for p in mp.parts}
    assert named == {(0, 0, 2, 6): 1, (2, 2, 6, 4): 3, (4, 0, 6, 2): 5, (4, 4, 6, 6): 4}


def test_five_color_left_chain():
    # windows to the left repeatedly: a staircase descending leftwards
    P = validate_polygon([(0, 4), (2, 4), (2, 2), (4, 2), (4, 0), (8, 0), (8, 1), (6, 1),
                          (6, 3), (3, 3), (3, 5), (0, 5)])
    mp = mounts_partition(P)
    cols = five_color_parts(mp)
    adj = mp.adjacency()
    for u, vs in adj.items():
        for v in vs:
            assert cols[u] != cols[v]


# ---------------------------------------------------------------------------
# properties

ortho = st.builds(lambda k, s: validate_polygon(generate("random-ortho", k, s)),
                  st.sampled_from([8, 12, 16, 24, 32, 48, 64]), st.integers(0, 10_000))


@settings(max_examples=40, deadline=None)
@given(ortho)
def test_cutting_is_a_partition_and_tree(P):
    for o in ("h", "v"):
        parts, tree = cutting(P, o)
        assert_partition(parts, parts[0].grid)
        assert len(tree) == len(parts)
        b = heavy_path_iterations(tree)
        n = len(parts)
        assert iteration_count(b) <= (math.ceil(math.log2(n)) + 1 if n > 1 else 1)


@settings(max_examples=40, deadline=None)
@given(ortho)
def test_mounts_partition_invariants(P):
    mp = mounts_partition(P)
    assert_partition(mp.parts, mp.grid)
    assert mp.bent_windows == 0
    g = mp.grid
    for part in mp.parts:
        a, b = part.base
        swept = sweep_cells(g, a, b, None)
        assert not (part.cells & ~swept).any()
    cols = five_color_parts(mp)
    for u, vs in mp.adjacency().items():
        if mp.parent.get(u) is not None:
            assert cols[u] != cols[mp.parent[u]]
    for c, p in mp.parent.items():
        if p is not None:
            assert cols[c] != cols[p]
    assert set(cols.values()) <= set(range(1, 6)) or mp.color_violations


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["snake", "staircase", "comb"]), st.integers(1, 12),
       st.integers(0, 1000))
def test_snake_split_parts_are_mount_or_staircase(family, k, seed):
    P = validate_polygon(generate(family, k, seed))
    assert is_snake(P)
    parts = snake_split(P)
    assert_partition(parts, parts[0].grid)
    for p in parts:
        assert p.kind in ("mount", "staircase")
        if p.kind == "staircase":
            assert is_xy_monotone_mask(p.cells)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(0, 1000))
def test_mount_family_is_mount(k, seed):
    # organ-pipe ceilings make most mounts non-snakes, but the base property always holds
    P = validate_polygon(generate("mount", k, seed))
    ok, base = is_mount(P)
    assert ok and base[0][1] == base[1][1] == 0
