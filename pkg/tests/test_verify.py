from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bruteforce import chromatic, oracle as brute_oracle
from chromaguard import (
    ConflictGraph,
    conflict_graph,
    coverage_report,
    guard_alpha,
    guard_mount_rect,
    guard_ortho_O,
    guard_ortho_rect,
    guard_snake,
    is_proper_coloring,
    validate_polygon,
)
from chromaguard.guards import Guard, region_for
from chromaguard.verify import (
    exact_chromatic,
    exact_coloring,
    greedy_color,
    k_colorable_bruteforce,
    oracle_chromatic_guarding,
    sample_points,
)
from conftest import FIXTURES, D, poly

# Independent brute-force results (bruteforce.oracle, quarter-unit lattice), frozen.
# name -> {model: (value, distinct candidate regions)}
ORACLE_TABLE = {
    "SQ4": {"rect": (1, 1), "full": (1, 1), "O": (1, 1)},
    "L6": {"rect": (1, 3), "full": (1, 5), "O": (1, 8)},
    "M8": {"rect": (2, 4), "full": (2, 10), "O": (1, 15)},
    "H12": {"rect": (2, 4), "full": (1, 14)},
    "STAIR3": {"rect": (1, 6), "full": (1, 10)},
    "SPIRAL": {"rect": (2, 4), "full": (2, 11)},
}


def guard(P, pos, kind, orientation=None, width=None):
    g = Guard(D(pos), kind, orientation=orientation, width=width)
    g.region = region_for(P, g)
    return g


# ---------------------------------------------------------------------------
# conflict graphs


def test_two_rect_guards_in_square_conflict():
    P = poly("SQ4")
    gs = [guard(P, (0, 0), "rect"), guard(P, (4, 4), "rect")]
    cg = conflict_graph(gs, P)
    assert cg.edges == frozenset({(0, 1)})


def test_opposite_half_planes_do_not_conflict():
    P = poly("SQ4")
    gs = [guard(P, (2, 2), "alpha", 0, 180), guard(P, (2, 2), "alpha", 180, 180)]
    assert conflict_graph(gs, P).edges == frozenset()
    # sharing the dividing segment is a conflict only under point semantics
    assert conflict_graph(gs, P, semantics="point").edges == frozenset({(0, 1)})


def test_m8_towers_conflict_only_through_the_base():
    P = poly("M8")
    gs = [guard(P, (0, 4), "rect"), guard(P, (6, 4), "rect"), guard(P, (3, 0), "rect")]
    cg = conflict_graph(gs, P)
    assert cg.edges == frozenset({(0, 2), (1, 2)})


class ShapeOnly:
    """A region stand-in without cells, forcing the polygon-overlap path."""

    def __init__(self, region):
        self.shape = region.shape
        self.cells = None


def test_cell_and_shape_paths_agree():
    P = poly("H12")
    pts = [(0, 0), (2, 2), (4, 4), (6, 6), (0, 6), (3, 3)]
    gs = [guard(P, p, "rect") for p in pts]
    cells = conflict_graph(gs, P)
    shapes = conflict_graph([ShapeOnly(g.region) for g in gs], P)
    assert cells.edges == shapes.edges and cells.edges


# ---------------------------------------------------------------------------
# colorings


def test_proper_coloring_examples():
    k2 = ConflictGraph.from_edges(2, [(0, 1)])
    assert is_proper_coloring(k2, [1, 2])
    bad = is_proper_coloring(k2, [1, 1])
    assert not bad and bad.violation == (0, 1, 1)
    assert is_proper_coloring(k2, {0: 3, 1: 1})
    with pytest.raises(ValueError):
        is_proper_coloring(k2, [1])
    with pytest.raises(ValueError):
        is_proper_coloring(k2, {0: 1})


def test_greedy_examples():
    empty = ConflictGraph.from_edges(4, [])
    assert greedy_color(empty) == [1, 1, 1, 1]
    k4 = ConflictGraph.from_edges(4, itertools.combinations(range(4), 2))
    assert sorted(greedy_color(k4)) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        greedy_color(k4, order=[0, 1, 2])


def test_greedy_keeps_compatible_seed_colors():
    p3 = ConflictGraph.from_edges(3, [(0, 1), (1, 2)])
    assert greedy_color(p3, seed=[5, 7, 5]) == [5, 7, 5]


def test_exact_examples():
    k3 = ConflictGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert exact_chromatic(k3) == 3
    p5 = ConflictGraph.from_edges(5, [(k, k + 1) for k in range(4)])
    assert exact_chromatic(p5) == 2
    c5 = ConflictGraph.from_edges(5, [(k, (k + 1) % 5) for k in range(5)])
    assert exact_chromatic(c5) == 3
    assert exact_chromatic(ConflictGraph.from_edges(0, [])) == 0
    cols = exact_coloring(c5)
    assert is_proper_coloring(c5, cols) and len(set(cols)) == 3


graphs = st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20)))


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_exact_matches_bruteforce(g):
    n, edges = g
    cg = ConflictGraph.from_edges(n, edges)
    chi = exact_chromatic(cg)
    assert chi == chromatic(n, sorted(cg.edges))
    assert k_colorable_bruteforce(cg, chi) and (chi == 0 or not k_colorable_bruteforce(cg, chi - 1))


@settings(max_examples=100, deadline=None)
@given(graphs, st.integers(0, 1000))
def test_greedy_bounds(g, seed):
    n, edges = g
    cg = ConflictGraph.from_edges(n, edges)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    cols = greedy_color(cg, order=order)
    assert is_proper_coloring(cg, cols)
    maxdeg = max((cg.degree(v) for v in range(n)), default=0)
    assert max(cols) <= maxdeg + 1
    assert len(set(cols)) >= exact_chromatic(cg)


# ---------------------------------------------------------------------------
# coverage


def test_coverage_exact_for_rect_regions():
    P = poly("L6")
    rep = coverage_report([guard(P, (2, 2), "rect")], P)
    assert rep.mode == "exact" and rep.complete and rep.covered_fraction == 1
    P = poly("H12")
    rep = coverage_report([guard(P, (0, 0), "rect")], P)
    assert not rep.complete and 0 < rep.covered_fraction < 1


def test_coverage_sampled_for_wedges():
    P = poly("SQ4")
    rep = coverage_report([guard(P, (0, 0), "O", 0, 90)], P)
    assert rep.mode == "sampled" and rep.complete
    rep = coverage_report([guard(P, (0, 0), "alpha", 0, 45)], P)
    assert not rep.complete
    assert all(x < y for x, y in rep.uncovered)


def test_sample_points_lie_in_closed_polygon():
    P = poly("L6")
    pts = sample_points(P)
    # 3x3 corners + 2x3 + 3x2 midpoints + 2x2 centers, minus the 4 in the missing quadrant
    assert len(pts) == 25 - 4


# ---------------------------------------------------------------------------
# oracle


@pytest.mark.parametrize("name,model", [(n, m) for n, row in ORACLE_TABLE.items() for m in row])
def test_oracle_matches_frozen_table(name, model):
    value, count = ORACLE_TABLE[name][model]
    res = oracle_chromatic_guarding(poly(name), model)
    assert res.value == value
    assert res.candidates == count
    assert coverage_report(res.witness, poly(name)).complete
    cg = conflict_graph(res.witness, poly(name))
    assert is_proper_coloring(cg, [g.color for g in res.witness])
    assert len({g.color for g in res.witness}) == value


@pytest.mark.slow
@pytest.mark.parametrize("name,model", [("SQ4", "rect"), ("L6", "full"), ("M8", "rect"),
                                        ("SPIRAL", "rect")])
def test_frozen_table_reproduces_from_bruteforce(name, model):
    assert brute_oracle(FIXTURES[name], model) == ORACLE_TABLE[name][model]


def test_oracle_literature_anchors():
    assert oracle_chromatic_guarding(poly("STAIR3"), "full").value <= 3
    assert oracle_chromatic_guarding(poly("SPIRAL"), "full").value <= 2


def test_oracle_limits():
    with pytest.raises(ValueError):
        oracle_chromatic_guarding(poly("H12"), "O")
    big = validate_polygon([(0, 0), (7, 0), (7, 1), (6, 1), (6, 2), (5, 2), (5, 3), (4, 3),
                            (4, 4), (3, 4), (3, 5), (2, 5), (2, 6), (0, 6)])
    with pytest.raises(ValueError):
        oracle_chromatic_guarding(big, "full")


def pipeline_plans(P):
    """(model, plan guards) for every pipeline applicable to P."""
    from chromaguard import is_mount, is_snake
    out = [("rect", guard_ortho_rect(P).guards), ("O", guard_ortho_O(P).guards)]
    if is_mount(P)[0]:
        out.append(("rect", guard_mount_rect(P)))
    if is_snake(P):
        out.append(("O", guard_snake(P).guards))
    for a in (90, 180):
        out.append((("alpha", a), guard_alpha(P, a).guards))
    return out


@pytest.mark.parametrize("name", ["SQ4", "L6", "M8", "H12", "STAIR3", "SPIRAL"])
def test_pipelines_never_beat_oracle(name):
    P = poly(name)
    checked = 0
    for model, guards in pipeline_plans(P):
        colors = len({g.color for g in guards})
        try:
            res = oracle_chromatic_guarding(P, model, extra=guards)
        except ValueError:
            continue  # candidate set too large
        assert colors >= res.value, model
        checked += 1
    assert checked >= 1


def test_vertex_grid_oracle_is_only_an_upper_bound():
    # the half-plane pipeline places guards off the vertex grid and beats it
    P = poly("SPIRAL")
    assert oracle_chromatic_guarding(P, ("alpha", 180)).value == 2
    plan = guard_alpha(P, 180)
    assert plan.colors_used == 1 and plan.coverage.complete
    assert oracle_chromatic_guarding(P, ("alpha", 180), extra=plan.guards).value == 1
