import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import path_contains
from pancake.geometry import (
    SLIVER_RTOL,
    GeometryError,
    Line2,
    MetricKind,
    Point2,
    Side,
    SimplePolygon,
    clip_polygon,
    contains_point,
    distance,
    is_self_intersecting,
    l1_distance,
    l2_distance,
    polygon_area,
    side_of,
    signed_area,
    split_polygon,
    zone_contains,
)

ORIGIN = Point2(0, 0)
SALE = Point2(764, 490)
SQUARE = SimplePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
U_SHAPE = SimplePolygon([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])


def test_robbins_distances():
    assert l2_distance(ORIGIN, SALE) == pytest.approx(907.63, abs=0.01)
    assert l1_distance(ORIGIN, SALE) == 1254.0


def test_small_distance_cases():
    assert l2_distance(Point2(5, 5), Point2(5, 5)) == 0
    assert l2_distance(ORIGIN, Point2(3, 4)) == 5
    assert l1_distance(Point2(1, 2), Point2(1, 2)) == 0
    assert l1_distance(ORIGIN, Point2(3, 4)) == 7


def test_zone_verdict_flips_between_metrics():
    assert zone_contains(ORIGIN, 1000, MetricKind.EUCLIDEAN, SALE)
    assert not zone_contains(ORIGIN, 1000, MetricKind.MANHATTAN, SALE)
    for m in MetricKind:
        assert zone_contains(ORIGIN, 1000, m, ORIGIN)


def test_sale_point_lies_where_the_zones_disagree():
    assert l2_distance(ORIGIN, SALE) <= 1000 < l1_distance(ORIGIN, SALE)


@pytest.mark.parametrize("r", [0, -5, math.inf, math.nan])
def test_zone_rejects_bad_radius(r):
    with pytest.raises(GeometryError):
        zone_contains(ORIGIN, r, MetricKind.EUCLIDEAN, SALE)


def test_zones_are_disk_and_diamond():
    assert zone_contains(ORIGIN, 1, MetricKind.MANHATTAN, Point2(0.5, 0.5))
    assert not zone_contains(ORIGIN, 1, MetricKind.MANHATTAN, Point2(0.6, 0.6))
    assert zone_contains(ORIGIN, 1, MetricKind.EUCLIDEAN, Point2(0.6, 0.6))
    assert not zone_contains(ORIGIN, 1, MetricKind.EUCLIDEAN, Point2(0.8, 0.8))


def test_metric_parse():
    assert MetricKind.parse("L1") is MetricKind.MANHATTAN
    assert MetricKind.parse("euclidean") is MetricKind.EUCLIDEAN
    with pytest.raises(GeometryError):
        MetricKind.parse("chebyshev")


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point2(math.nan, 0)
    with pytest.raises(GeometryError):
        Point2(0, math.inf)


def test_metric_axioms_on_ten_thousand_triples():
    rng = np.random.default_rng(0)
    P = rng.uniform(-1e3, 1e3, size=(10_000, 3, 2))
    P[::7, 1] = P[::7, 0]  # exercise identity of indiscernibles
    for metric in MetricKind:
        for p, q, r in P:
            p, q, r = Point2(*p), Point2(*q), Point2(*r)
            d_pq, d_qp = distance(p, q, metric), distance(q, p, metric)
            assert d_pq >= 0
            assert d_pq == d_qp
            assert (d_pq == 0) == (p == q)
            assert d_pq <= distance(p, r, metric) + distance(r, q, metric) + 1e-9


coord = st.floats(-1e6, 1e6, allow_nan=False)


@given(coord, coord, coord, coord)
def test_l1_dominates_l2_dominates_each_axis(x0, y0, x1, y1):
    p, q = Point2(x0, y0), Point2(x1, y1)
    l1, l2 = l1_distance(p, q), l2_distance(p, q)
    assert l1 >= l2 * (1 - 1e-15)
    assert l2 >= abs(x0 - x1) * (1 - 1e-15)
    assert l2 >= abs(y0 - y1) * (1 - 1e-15)


# -- lines ---------------------------------------------------------------------


def test_line_canonical_form():
    a = Line2.from_coeffs(0, -2, 0)
    b = Line2.from_coeffs(0, 1, 0)
    assert a == b == Line2(0.0, 1.0, 0.0)
    c = Line2.from_coeffs(-3, -4, -5)
    assert c == Line2(0.6, 0.8, 1.0)
    assert math.copysign(1, Line2.from_coeffs(0, 1, -0.0).c) == 1
    with pytest.raises(GeometryError):
        Line2.from_coeffs(0, 0, 1)


def test_line_through_points_is_canonical():
    l1 = Line2.through_points(Point2(0, 0), Point2(2, 2))
    l2 = Line2.through_points(Point2(2, 2), Point2(0, 0))
    assert l1 == l2
    assert l1.a > 0 and math.isclose(l1.a ** 2 + l1.b ** 2, 1)


def test_side_of_x_axis():
    x_axis = Line2.from_coeffs(0, 1, 0)
    assert side_of(x_axis, Point2(5, 3)) is Side.POSITIVE
    assert side_of(x_axis, Point2(5, -3)) is Side.NEGATIVE
    assert side_of(x_axis, Point2(5, 0)) is Side.ON
    assert side_of(x_axis, Point2(5, 1e-9), eps_on=1e-6) is Side.ON


def test_positive_side_is_left_of_direction():
    line = Line2.from_coeffs(1, 1, 0)
    dx, dy = line.direction
    assert side_of(line, Point2(-dy, dx)) is Side.POSITIVE


# -- polygons ------------------------------------------------------------------


def test_polygon_areas():
    assert polygon_area(SQUARE) == 1
    assert polygon_area(SimplePolygon([(0, 0), (4, 0), (0, 3)])) == 6
    hexagon = SimplePolygon([(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)])
    assert abs(polygon_area(hexagon) - 3 * math.sqrt(3) / 2) < 1e-12


def test_polygon_orientation_and_closing_vertex():
    cw = SimplePolygon([(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)])
    assert len(cw) == 4
    assert signed_area(cw.vertices) == 1.0


@pytest.mark.parametrize("verts", [
    [(0, 0), (1, 1), (1, 0), (0, 1)],      # bow tie
    [(0, 0), (1, 0)],                       # too few
    [(0, 0), (1, 0), (2, 0)],               # zero area
    [(0, 0), (2, 0), (1, 0), (1, 1)],       # folds back on itself
])
def test_invalid_polygons_rejected(verts):
    with pytest.raises(GeometryError):
        SimplePolygon(verts)


def test_polygon_area_rejects_self_intersection():
    with pytest.raises(GeometryError):
        polygon_area([Point2(0, 0), Point2(1, 1), Point2(1, 0), Point2(0, 1)])


def test_self_intersection_detector():
    assert not is_self_intersecting(U_SHAPE.vertices)
    assert is_self_intersecting([Point2(0, 0), Point2(1, 1), Point2(1, 0), Point2(0, 1)])


def test_contains_point_boundary_and_notch():
    assert contains_point(U_SHAPE, Point2(0.5, 2))
    assert not contains_point(U_SHAPE, Point2(1.5, 2))
    assert contains_point(U_SHAPE, Point2(1.5, 1))      # notch floor is boundary
    assert not contains_point(U_SHAPE, Point2(1.5, 1.001))


# -- clipping ------------------------------------------------------------------


def test_clip_square_in_half():
    pieces = clip_polygon(SQUARE, Line2.from_coeffs(1, 0, 0.5), Side.POSITIVE)
    assert len(pieces) == 1
    assert polygon_area(pieces[0]) == pytest.approx(0.5)
    xs = sorted({p.x for p in pieces[0].vertices})
    assert xs == [0.5, 1.0]


def test_clip_disjoint_halfplane_is_empty():
    assert clip_polygon(SQUARE, Line2.from_coeffs(1, 0, 2), Side.POSITIVE) == []
    assert clip_polygon(SQUARE, Line2.from_coeffs(1, 0, 2), Side.NEGATIVE) == [SQUARE]


def test_clip_rejects_on_side():
    with pytest.raises(GeometryError):
        clip_polygon(SQUARE, Line2.from_coeffs(1, 0, 0.5), Side.ON)


def test_u_shape_cut_through_notch_gives_two_arms():
    pos, neg = split_polygon(U_SHAPE, Line2.from_coeffs(0, 1, 2))
    assert len(pos) == 2 and len(neg) == 1
    assert sorted(polygon_area(p) for p in pos) == pytest.approx([1.0, 1.0])
    assert polygon_area(neg[0]) == pytest.approx(5.0)


def test_u_shape_cut_along_notch_floor_separates_arms():
    # the arms only meet the base along the cut line itself
    pos, neg = split_polygon(U_SHAPE, Line2.from_coeffs(0, 1, 1))
    assert len(pos) == 2 and len(neg) == 1
    assert sum(polygon_area(p) for p in pos) == pytest.approx(4.0)


def test_clip_through_vertices_of_square():
    diag = Line2.through_points(Point2(0, 0), Point2(1, 1))
    pos, neg = split_polygon(SQUARE, diag)
    assert len(pos) == 1 and len(neg) == 1
    assert polygon_area(pos[0]) == pytest.approx(0.5)
    assert polygon_area(neg[0]) == pytest.approx(0.5)


def test_split_vertices_are_bit_identical_on_both_sides():
    line = Line2.from_coeffs(0.3, 0.7, 1.1)
    pos, neg = split_polygon(U_SHAPE, line)
    on = lambda ps: {v for p in ps for v in p.vertices if abs(line.value(v)) < 1e-12}
    assert on(pos) == on(neg) and on(pos)


def test_sliver_dropped_and_audited():
    tri = SimplePolygon([(0, 0), (1, 0), (0, 1)])
    line = Line2.from_coeffs(1, 1, 1e-7)
    audit = []
    pieces = clip_polygon(tri, line, Side.NEGATIVE, audit)
    assert pieces == []
    assert audit and "sliver" in audit[0]
    assert SLIVER_RTOL > 0


def star_polygons():
    @st.composite
    def build(draw):
        n = draw(st.integers(3, 14))
        radii = draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
        jitter = draw(st.lists(st.floats(0.0, 0.8), min_size=n, max_size=n))
        cx, cy = draw(st.floats(-5, 5)), draw(st.floats(-5, 5))
        verts = []
        for k in range(n):
            ang = 2 * math.pi * (k + jitter[k]) / n
            verts.append((cx + radii[k] * math.cos(ang), cy + radii[k] * math.sin(ang)))
        return SimplePolygon(verts)
    return build()


lines = st.builds(
    lambda t, c: Line2.from_coeffs(math.cos(t), math.sin(t), c),
    st.floats(0, 2 * math.pi), st.floats(-6, 6))


@settings(max_examples=300)
@given(star_polygons(), lines)
def test_clip_conserves_area(poly, line):
    pos, neg = split_polygon(poly, line)
    total = polygon_area(poly)
    assert abs(sum(map(polygon_area, pos)) + sum(map(polygon_area, neg)) - total) <= 1e-9 * total


@settings(max_examples=150)
@given(star_polygons(), lines, st.integers(0, 2 ** 32 - 1))
def test_clip_membership_matches_independent_point_in_polygon(poly, line, seed):
    pos, neg = split_polygon(poly, line)
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = poly.bbox()
    for x, y in zip(rng.uniform(x0, x1, 60), rng.uniform(y0, y1, 60)):
        p = Point2(x, y)
        v = line.value(p)
        if abs(v) < 1e-9:
            continue
        inside = path_contains(poly.as_tuples(), (x, y))
        pieces = pos if v > 0 else neg
        in_piece = any(path_contains(q.as_tuples(), (x, y)) for q in pieces)
        assert in_piece == inside


@settings(max_examples=150)
@given(st.floats(0.1, 3), st.integers(3, 12), lines)
def test_convex_input_gives_at_most_one_piece(r, n, line):
    poly = SimplePolygon([(r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n))
                          for k in range(n)])
    pos, neg = split_polygon(poly, line)
    assert len(pos) <= 1 and len(neg) <= 1
