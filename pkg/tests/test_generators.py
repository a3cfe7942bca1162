from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromaguard import is_monotone, is_mount, is_snake, validate_polygon
from chromaguard.decomposition import is_xy_monotone_mask
from chromaguard.generators import FAMILIES, generate
from conftest import poly


def canonical_shape(P):
    """Vertex cycle translated to the origin and scaled to unit gcd, for congruence checks."""
    from math import gcd
    vs = [tuple(v) for v in P.user_vertices()]
    x0 = min(x for x, _ in vs)
    y0 = min(y for _, y in vs)
    vs = [(x - x0, y - y0) for x, y in vs]
    g = 0
    for x, y in vs:
        g = gcd(g, gcd(x, y))
    return sorted((x // g, y // g) for x, y in vs)


def test_staircase_one_step_is_rectangle():
    for seed in range(5):
        P = validate_polygon(generate("staircase", 1, seed))
        assert P.n == 4


@pytest.mark.parametrize("k", [1, 2, 3, 7, 15])
def test_staircase_vertex_count_and_monotone(k):
    P = validate_polygon(generate("staircase", k, 3))
    assert P.n == 2 * k + 2
    assert is_monotone(P, "x") and is_monotone(P, "y")


def test_comb_two_is_m8():
    assert canonical_shape(validate_polygon(generate("comb", 2, 0))) == canonical_shape(poly("M8"))


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_comb_teeth_and_mount(k):
    P = validate_polygon(generate("comb", k, 0))
    assert is_mount(P)[0]
    tops = [e for e in P.edges() if e[0][1] == e[1][1] == max(y for _, y in P.vertices)]
    assert len(tops) == k


def test_random_ortho_50_7():
    P = validate_polygon(generate("random-ortho", 50, 7))
    assert P.orthogonal and P.n == 50


def test_unknown_family_and_bad_size():
    with pytest.raises(ValueError, match="unknown family"):
        generate("spiral", 3, 0)
    with pytest.raises(ValueError):
        generate("snake", 0, 0)


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic(family):
    assert generate(family, 6, 11) == generate(family, 6, 11)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 20), st.integers(0, 10_000))
def test_family_invariants(family, k, seed):
    P = validate_polygon(generate(family, k, seed))
    assert P.orthogonal
    if family == "snake":
        assert is_snake(P)
    elif family == "staircase":
        assert P.n == 2 * k + 2
        from chromaguard import refined_grid
        assert is_xy_monotone_mask(refined_grid(P).inside)
    elif family in ("comb", "mount"):
        assert is_mount(P)[0]
    else:
        assert P.n == max(4, k + k % 2)
