from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import Point as SPoint

from bruteforce import in_wedge, lattice, perp_visible, rect_visible, seg_visible, shape
from chromaguard import (
    WedgeSpec,
    ortho_visibility_from_edge,
    rect_visibility,
    refined_grid,
    validate_polygon,
    visibility_polygon,
    wedge_visibility,
    windows_of,
)
from chromaguard.generators import generate
from chromaguard.visibility import VisibilityError
from conftest import FIXTURES, GENERAL, ORTHO, D, poly


def user_area(region):
    return region.area / 4


def test_visibility_polygon_examples():
    assert user_area(visibility_polygon(poly("SQ4"), D((2, 2)))) == 16
    # the shadow behind (2,2) seen from (1,1) lies outside L6, so nothing is hidden
    assert user_area(visibility_polygon(poly("L6"), D((1, 1)))) == 12
    assert user_area(visibility_polygon(poly("L6"), D((2, 2)))) == 12


def test_visibility_polygon_hides_shadow():
    # from (3,0) the reflex vertex (2,2) hides the upper bar right of the ray to (1,4)
    r = visibility_polygon(poly("L6"), D((3, 0)))
    assert user_area(r) == 12 - 1
    assert r.contains(D((1, 4))) and r.contains(D((0, 3)))
    assert not r.contains(D((2, 4)))


def test_outside_apex_rejected():
    with pytest.raises(ValueError):
        visibility_polygon(poly("L6"), D((3, 3)))
    with pytest.raises(VisibilityError):
        rect_visibility(poly("L6"), D((3, 3)))


def test_wedge_examples():
    sq = poly("SQ4")
    assert user_area(wedge_visibility(sq, WedgeSpec(D((0, 0)), 0, 90))) == 16
    tri = wedge_visibility(sq, WedgeSpec(D((0, 0)), 0, 45))
    assert set(tri.boundary) == {D((0, 0)), D((4, 0)), D((4, 4))}
    # apex on the top edge of the upper bar looking down-right: only the
    # ray along x=2 stays inside, so the region has no area
    deg = wedge_visibility(poly("L6"), WedgeSpec(D((2, 4)), 270, 90))
    assert deg.area == 0


def test_wedge_width_bounds():
    with pytest.raises(ValueError):
        WedgeSpec((0, 0), 0, 0)
    with pytest.raises(ValueError):
        WedgeSpec((0, 0), 0, 181)
    assert WedgeSpec((0, 0), 90, 90).is_orthogonal
    assert not WedgeSpec((0, 0), 45, 90).is_orthogonal


def test_rect_visibility_examples():
    assert user_area(rect_visibility(poly("SQ4"), D((1, 3)))) == 16
    assert user_area(rect_visibility(poly("L6"), D((2, 2)))) == 12
    r = rect_visibility(poly("L6"), D((3, 1)))
    assert set(r.boundary) == {D((0, 0)), D((4, 0)), D((4, 2)), D((0, 2))}


def test_ortho_visibility_examples():
    L = poly("L6")
    assert user_area(ortho_visibility_from_edge(L, (D((0, 0)), D((4, 0))))) == 12
    H = poly("H12")
    col = ortho_visibility_from_edge(H, (D((0, 0)), D((2, 0))))
    assert set(col.boundary) == {D((0, 0)), D((2, 0)), D((2, 6)), D((0, 6))}
    sq = poly("SQ4")
    for e in sq.edges():
        assert user_area(ortho_visibility_from_edge(sq, e)) == 16
    with pytest.raises(VisibilityError):
        ortho_visibility_from_edge(sq, (D((0, 0)), D((4, 4))))


def test_windows_examples():
    H = poly("H12")
    base = (D((0, 0)), D((2, 0)))
    w = windows_of(ortho_visibility_from_edge(H, base), H, exclude=base)
    assert [x.segment for x in w] == [(D((2, 2)), D((2, 4)))]
    assert w[0].orientation == "vertical" and w[0].is_segment
    win = w[0].segment
    right = ortho_visibility_from_edge(H, win, side=1)
    ws = windows_of(right, H, exclude=win)
    assert sorted(x.segment for x in ws) == [(D((4, 2)), D((6, 2))), (D((4, 4)), D((6, 4)))]
    sq = poly("SQ4")
    assert windows_of(visibility_polygon(sq, D((2, 2))), sq) == []


def test_windows_of_diagonal_region():
    r = visibility_polygon(poly("L6"), D((3, 0)))
    ws = windows_of(r, poly("L6"))
    assert len(ws) == 1 and ws[0].orientation == "diagonal"


# ---------------------------------------------------------------------------
# rasterized agreement


def _grid_points(name):
    verts = FIXTURES[name]
    S = shape(verts)
    xs = sorted({x for x, _ in verts})
    ys = sorted({y for _, y in verts})
    return [(x, y) for x in xs for y in ys if S.buffer(1e-9).covers(SPoint(x, y))]


def _diag_agreement(region, S, truth, pts):
    shp = region.shape  # internal (doubled) coordinates
    grown = shp.buffer(1e-9)
    bad = 0
    for q in pts:
        sq = SPoint(2 * q[0], 2 * q[1])
        got = grown.covers(sq)
        if got != truth(q):
            bad += 1
            assert shp.boundary.distance(sq) < 1e-6, q
    return 1 - bad / max(len(pts), 1)


@pytest.mark.parametrize("name", list(FIXTURES))
def test_visibility_matches_raster(name):
    P = poly(name)
    S = shape(FIXTURES[name])
    pts = lattice(FIXTURES[name], 0.25, (0.37, 0.61))
    for p in _grid_points(name):
        r = visibility_polygon(P, D(p))
        rate = _diag_agreement(r, S, lambda q: seg_visible(S, p, q), pts)
        assert rate >= 0.999


@pytest.mark.parametrize("name", ["SQ4", "L6", "H12", "TRI", "ZIG"])
@pytest.mark.parametrize("start,width", [(0, 90), (90, 90), (30, 45), (200, 80), (300, 120),
                                          (45, 180)])
def test_wedge_matches_raster(name, start, width):
    P = poly(name)
    S = shape(FIXTURES[name])
    pts = lattice(FIXTURES[name], 0.25, (0.37, 0.61))
    for p in _grid_points(name):
        r = wedge_visibility(P, WedgeSpec(D(p), start, width))
        rate = _diag_agreement(
            r, S, lambda q: in_wedge(p, q, start, width) and seg_visible(S, p, q), pts)
        assert rate >= 0.999


def _cell_agreement(region, truth, verts):
    """Half-unit cell centers: the refined grid is integral, so this is exact."""
    pts = lattice(verts, 0.5)
    hits = 0
    for q in pts:
        got = region.contains((2 * q[0], 2 * q[1]))
        assert got == truth(q), q
        hits += got
    assert hits * 0.25 == user_area(region)


@pytest.mark.parametrize("name", ORTHO)
def test_rect_visibility_matches_raster(name):
    P = poly(name)
    S = shape(FIXTURES[name])
    for p in _grid_points(name):
        r = rect_visibility(P, D(p))
        _cell_agreement(r, lambda q: rect_visible(S, p, q), FIXTURES[name])


@pytest.mark.parametrize("name", ORTHO)
def test_ortho_visibility_matches_raster(name):
    P = poly(name)
    S = shape(FIXTURES[name])
    for a, b in P.edges():
        e = ((a[0] / 2, a[1] / 2), (b[0] / 2, b[1] / 2))
        r = ortho_visibility_from_edge(P, (a, b))
        _cell_agreement(r, lambda q: perp_visible(S, e, q), FIXTURES[name])


# ---------------------------------------------------------------------------
# properties

ortho_polys = st.builds(lambda k, s: validate_polygon(generate("random-ortho", k, s)),
                        st.sampled_from([6, 8, 12, 16, 24]), st.integers(0, 10_000))


def _inner_points(P, limit=12):
    g = refined_grid(P)
    pts = [(x, y) for x in g.xs for y in g.ys]
    from chromaguard import point_in_polygon, Location
    pts = [p for p in pts if point_in_polygon(p, P) is not Location.OUTSIDE]
    step = max(1, len(pts) // limit)
    return pts[::step]


@settings(max_examples=25, deadline=None)
@given(ortho_polys)
def test_visibility_symmetric(P):
    pts = _inner_points(P)
    regs = {p: visibility_polygon(P, p) for p in pts}
    for p in pts:
        assert regs[p].contains(p)
        for q in pts:
            assert regs[p].contains(q) == regs[q].contains(p)


@settings(max_examples=25, deadline=None)
@given(ortho_polys)
def test_rect_visibility_symmetric(P):
    pts = _inner_points(P)
    g = refined_grid(P)
    regs = {p: rect_visibility(P, p, grid=g) for p in pts}
    for p in pts:
        assert regs[p].contains(p)
        for q in pts:
            assert regs[p].contains(q) == regs[q].contains(p)


@settings(max_examples=25, deadline=None)
@given(ortho_polys)
def test_cell_region_areas_exact(P):
    for p in _inner_points(P, 5):
        r = rect_visibility(P, p)
        assert abs(r.shape.area - float(r.area)) < 1e-9
    for e in P.edges():
        r = ortho_visibility_from_edge(P, e)
        assert abs(r.shape.area - float(r.area)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(ortho_polys)
def test_half_plane_at_edge_equals_visibility(P):
    from chromaguard.visibility import angle_of
    for a, b in P.edges()[:4]:
        m = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
        v = (b[0] - a[0], b[1] - a[1])
        half = wedge_visibility(P, WedgeSpec(m, angle_of(v), 180, v))
        full = visibility_polygon(P, m)
        assert abs(float(half.area) - float(full.area)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(ortho_polys)
def test_perp_windows_are_segments(P):
    for e in P.edges():
        r = ortho_visibility_from_edge(P, e)
        for w in windows_of(r, P, exclude=e):
            assert w.is_segment and w.orientation in ("horizontal", "vertical")


@pytest.mark.parametrize("name", GENERAL)
def test_general_polygon_visibility_contains_apex(name):
    P = poly(name)
    for p in P.vertices:
        assert visibility_polygon(P, p).contains(p)
