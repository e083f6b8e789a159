"""Worked cases for every primitive of both backends.

Frozen numbers were computed with the hyperboloid reference in oracle.py
(or by hand for the symmetric cases); the oracle tests below recompute them.
"""

import math
from fractions import Fraction

import pytest

import oracle
from absolver.errors import (
    CoincidentPoints,
    DegenerateAngle,
    DirectionNotIdealEnd,
    IdenticalObjects,
    PointOnLine,
    UnsupportedInBackend,
)
from absolver.geometry import EUCLIDEAN as E
from absolver.geometry import HYPERBOLIC as H
from absolver.geometry import Arc, Diameter, Direction, Line, Point, fmt_float

X_AXIS = Diameter.from_direction(1, 0)
Y_AXIS = Diameter.from_direction(0, 1)
S2 = math.sqrt(2)


def approx_pt(p, q, tol=1e-9):
    return math.dist(p, q) <= tol


def is_arc(obj, center, radius, tol=1e-9):
    return isinstance(obj, Arc) and approx_pt(obj.center, center, tol) and abs(obj.radius - radius) <= tol


def is_diameter(obj, direction):
    d = Diameter.from_direction(*direction)
    return isinstance(obj, Diameter) and approx_pt(obj.direction, d.direction)


# frozen hyperbolic reference values
FROZEN = {
    "line_arc": ((1.25, 1.25), math.sqrt(2.125)),
    "circle_support": ((0.4, 0.0), 0.4),
    "perp_at_half": ((1.25, 0.0), 0.75),
    "bisector_0_06": ((5 / 3, 0.0), 4 / 3),
    "midpoint_0_06": (1 / 3, 0.0),
    "symmetric_0_half": (0.0, 0.8),
    "limiting_plus": ((1.0, 1.25), 1.25),
    "hyperparallel_x": ((0.0, 1.25), 0.75),
    "halfturn_x_axis": ((0.0, 1.025), 0.225),
    "reflect_origin": (1 / S2, 0.0),
    "dist_half": math.log(3),
    "dist_06": math.log(4),
}


class TestFrozenAgainstOracle:
    """The frozen numbers follow from the hyperboloid model."""

    def test_line_arc(self):
        n = oracle.line_normal((0.5, 0), (0, 0.5))
        c, r = oracle.arc_from_normal(n)
        assert approx_pt(c, FROZEN["line_arc"][0]) and abs(r - FROZEN["line_arc"][1]) < 1e-12

    def test_circle_support(self):
        (cx, _), r = FROZEN["circle_support"]
        d = oracle.hdist((0.5, 0), (0.8, 0))
        for t in range(12):
            a = 2 * math.pi * t / 12
            p = (cx + r * math.cos(a), r * math.sin(a))
            assert abs(oracle.hdist((0.5, 0), p) - d) < 1e-12

    def test_perpendiculars(self):
        n = oracle.perpendicular_normal((0.5, 0), oracle.normal_of_diameter((1, 0)))
        c, r = oracle.arc_from_normal(n)
        assert approx_pt(c, FROZEN["perp_at_half"][0]) and abs(r - FROZEN["perp_at_half"][1]) < 1e-12
        m = oracle.hmidpoint((0, 0), (0.6, 0))
        assert approx_pt(m, FROZEN["midpoint_0_06"], 1e-12)
        n = oracle.perpendicular_normal(m, oracle.normal_of_diameter((1, 0)))
        c, r = oracle.arc_from_normal(n)
        assert approx_pt(c, FROZEN["bisector_0_06"][0]) and abs(r - FROZEN["bisector_0_06"][1]) < 1e-12

    def test_point_maps(self):
        assert approx_pt(oracle.half_turn((0, 0), (0, 0.5)), FROZEN["symmetric_0_half"], 1e-12)
        n = oracle.normal_of_arc((S2, 0))
        assert approx_pt(oracle.reflect_in_line((0, 0), n), FROZEN["reflect_origin"], 1e-12)
        assert abs(oracle.hdist((0, 0), (0.5, 0)) - FROZEN["dist_half"]) < 1e-12
        assert abs(oracle.hdist((0, 0), (0.6, 0)) - FROZEN["dist_06"]) < 1e-12

    def test_parallels(self):
        # limiting parallel: geodesic through (0, 0.5) and the ideal point (1, 0)
        c, r = FROZEN["limiting_plus"]
        assert abs(c[0] ** 2 + c[1] ** 2 - r * r - 1) < 1e-12
        assert abs(math.dist(c, (0, 0.5)) - r) < 1e-12 and abs(math.dist(c, (1, 0)) - r) < 1e-12
        # hyperparallel: perpendicular at (0, 0.5) to the y axis
        n = oracle.perpendicular_normal((0, 0.5), oracle.normal_of_diameter((0, 1)))
        c, r = oracle.arc_from_normal(n)
        assert approx_pt(c, FROZEN["hyperparallel_x"][0]) and abs(r - FROZEN["hyperparallel_x"][1]) < 1e-12
        # image of the x axis under the half-turn about (0, 0.5)
        p, q = oracle.half_turn((0.3, 0), (0, 0.5)), oracle.half_turn((-0.2, 0), (0, 0.5))
        c, r = oracle.arc_from_normal(oracle.line_normal(p, q))
        assert approx_pt(c, FROZEN["halfturn_x_axis"][0]) and abs(r - FROZEN["halfturn_x_axis"][1]) < 1e-12


class TestLineThrough:
    def test_hyperbolic_diameter(self):
        assert is_diameter(H.line_through(Point(0, 0), Point(0.5, 0)), (1, 0))

    def test_hyperbolic_arc(self):
        assert is_arc(H.line_through(Point(0.5, 0), Point(0, 0.5)), *FROZEN["line_arc"])

    def test_euclidean(self):
        line = E.line_through(Point(0, 0), Point(1, 1))
        assert abs(line.offset) < 1e-12
        assert abs(abs(line.normal[0]) - 1 / S2) < 1e-12 and abs(line.normal[0] + line.normal[1]) < 1e-12

    @pytest.mark.parametrize("backend", [E, H])
    def test_coincident(self, backend):
        with pytest.raises(CoincidentPoints):
            backend.line_through(Point(0.1, 0.1), Point(0.1, 0.1))


class TestCircle:
    def test_hyperbolic_displaced_center(self):
        k = H.circle_center_point(Point(0.5, 0), Point(0.8, 0))
        (c, r) = FROZEN["circle_support"]
        assert approx_pt(k.center, c) and abs(k.radius - r) < 1e-9
        assert k.hcenter == Point(0.5, 0)

    def test_hyperbolic_origin(self):
        k = H.circle_center_point(Point(0, 0), Point(0.3, 0))
        assert approx_pt(k.center, (0, 0)) and abs(k.radius - 0.3) < 1e-12

    def test_euclidean(self):
        k = E.circle_center_point(Point(0, 0), Point(3, 4))
        assert abs(k.radius - 5) < 1e-12

    @pytest.mark.parametrize("backend", [E, H])
    def test_coincident(self, backend):
        with pytest.raises(CoincidentPoints):
            backend.circle_center_point(Point(0.2, 0), Point(0.2, 0))


class TestIntersect:
    def test_diameters(self):
        pts = H.intersect(X_AXIS, Y_AXIS)
        assert len(pts) == 1 and approx_pt(pts[0], (0, 0))

    def test_euclidean_line_circle_sorted(self):
        k = E.circle_center_point(Point(0, 0), Point(0.5, 0))
        pts = E.intersect(Line.from_normal(0, 1, 0), k)
        assert len(pts) == 2 and approx_pt(pts[0], (-0.5, 0)) and approx_pt(pts[1], (0.5, 0))

    def test_hyperparallel_lines_do_not_meet(self):
        assert H.intersect(X_AXIS, H.hyperparallel_at_foot(Point(0, 0.5), X_AXIS)) == []

    @pytest.mark.parametrize("backend", [E, H])
    def test_identical(self, backend):
        line = backend.line_through(Point(0.1, 0.2), Point(-0.3, 0.1))
        with pytest.raises(IdenticalObjects):
            backend.intersect(line, line)


class TestPerpendicular:
    def test_hyperbolic_symmetric(self):
        assert is_diameter(H.perpendicular_through(Point(0, 0.5), X_AXIS), (0, 1))

    def test_hyperbolic_on_line(self):
        assert is_arc(H.perpendicular_through(Point(0.5, 0), X_AXIS), *FROZEN["perp_at_half"])

    def test_euclidean(self):
        p = E.perpendicular_through(Point(1, 1), Line.from_normal(0, 1, 0))
        assert approx_pt(p.normal, (1, 0)) and abs(p.offset - 1) < 1e-12


class TestPerpBisector:
    def test_hyperbolic_symmetric(self):
        assert is_diameter(H.perp_bisector(Point(-0.3, 0), Point(0.3, 0)), (0, 1))

    def test_hyperbolic_from_origin(self):
        m = H.perp_bisector(Point(0, 0), Point(0.6, 0))
        assert is_arc(m, *FROZEN["bisector_0_06"])
        assert H.same(m, H.perpendicular_through(Point(1 / 3, 0), X_AXIS))

    def test_euclidean(self):
        m = E.perp_bisector(Point(0, 0), Point(2, 0))
        assert approx_pt(m.normal, (1, 0)) and abs(m.offset - 1) < 1e-12


class TestAngleBisector:
    def test_euclidean(self):
        s = E.angle_bisector(Point(1, 0), Point(0, 0), Point(0, 1))
        assert E.incident(Point(2, 2), s)

    def test_hyperbolic_symmetric(self):
        assert is_diameter(H.angle_bisector(Point(0.5, 0), Point(0, 0), Point(0, 0.5)), (1, 1))

    def test_hyperbolic_generic_equal_angles(self):
        x, v, y = Point(0.4, -0.1), Point(-0.2, 0.3), Point(0.1, 0.6)
        s = H.angle_bisector(x, v, y)
        whole = oracle.hangle(v, x, y)
        ring = H.circle_center_point(v, Point(v.x + 0.05, v.y))
        # the intersection inside the angle splits it into two equal halves
        inside = [w for w in H.intersect(s, ring)
                  if abs(oracle.hangle(v, x, w) + oracle.hangle(v, w, y) - whole) < 1e-9]
        assert len(inside) == 1
        assert abs(oracle.hangle(v, x, inside[0]) - whole / 2) < 1e-9

    def test_collinear(self):
        with pytest.raises(DegenerateAngle):
            E.angle_bisector(Point(1, 0), Point(0, 0), Point(2, 0))


class TestMidpointAndSymmetric:
    def test_hyperbolic_midpoints(self):
        assert approx_pt(H.midpoint(Point(-0.5, 0), Point(0.5, 0)), (0, 0))
        assert approx_pt(H.midpoint(Point(0, 0), Point(0.6, 0)), FROZEN["midpoint_0_06"])
        assert H.midpoint(Point(0.2, 0.1), Point(0.2, 0.1)) == Point(0.2, 0.1)

    def test_euclidean_midpoint(self):
        assert approx_pt(E.midpoint(Point(0, 0), Point(4, 2)), (2, 1))

    def test_symmetric(self):
        assert approx_pt(H.symmetric_point(Point(0.3, 0), Point(0, 0)), (-0.3, 0))
        assert approx_pt(H.symmetric_point(Point(0, 0), Point(0, 0.5)), FROZEN["symmetric_0_half"])
        assert approx_pt(E.symmetric_point(Point(1, 1), Point(2, 0)), (3, -1))


class TestEuclideanOnly:
    def test_ratio_point(self):
        r = E.ratio_point
        assert approx_pt(r(Point(0, 0), Point(0, 0), Point(2, 0), Fraction(3, 2)), (3, 0))
        assert approx_pt(r(Point(0, 0), Point(0, 0), Point(1, 1), Fraction(3)), (3, 3))
        assert approx_pt(r(Point(0.5, 1), Point(0.5, 1), Point(2, 7), Fraction(1)), (2, 7))

    def test_parallel_through(self):
        p = E.parallel_through(Point(0, 1), Line.from_normal(0, 1, 0))
        assert approx_pt(p.normal, (0, 1)) and abs(p.offset - 1) < 1e-12
        base = Line.from_normal(0, 1, 0)
        assert E.same(E.parallel_through(Point(5, 0), base), base)
        q = E.parallel_through(Point(2, 3), Line.from_normal(1, -1, 0))
        assert E.same(q, Line.from_normal(1, -1, -1))

    def test_hyperbolic_rejects(self):
        with pytest.raises(UnsupportedInBackend):
            H.ratio_point(Point(0, 0), Point(0, 0), Point(0.1, 0), Fraction(2))
        with pytest.raises(UnsupportedInBackend):
            H.parallel_through(Point(0, 0.5), X_AXIS)


class TestHyperbolicOnly:
    def test_limiting_parallel(self):
        up = H.limiting_parallel(Point(0, 0.5), X_AXIS, Direction.of(1, 0))
        assert is_arc(up, *FROZEN["limiting_plus"])
        down = H.limiting_parallel(Point(0, 0.5), X_AXIS, Direction.of(-1, 0))
        assert is_arc(down, (-1.0, 1.25), 1.25)
        assert H.intersect(up, X_AXIS) == []

    def test_limiting_parallel_through_origin(self):
        p = H.line_through(Point(0.5, 0.2), Point(-0.1, 0.6))
        end = H.ideal_endpoints(p)[0]
        lp = H.limiting_parallel(Point(0, 0), p, Direction.of(*end))
        assert isinstance(lp, Diameter) and H.incident(end, lp, 1e-7)

    def test_limiting_parallel_errors(self):
        with pytest.raises(PointOnLine):
            H.limiting_parallel(Point(0.2, 0), X_AXIS, Direction.of(1, 0))
        with pytest.raises(DirectionNotIdealEnd):
            H.limiting_parallel(Point(0, 0.5), X_AXIS, Direction.of(0, 1))

    def test_hyperparallel(self):
        assert is_arc(H.hyperparallel_at_foot(Point(0, 0.5), X_AXIS), *FROZEN["hyperparallel_x"])
        assert is_arc(H.hyperparallel_at_foot(Point(0.5, 0), Y_AXIS), (1.25, 0), 0.75)
        with pytest.raises(PointOnLine):
            H.hyperparallel_at_foot(Point(0.3, 0), X_AXIS)

    def test_hyperparallel_random_never_meets(self):
        import random

        rng = random.Random(7)
        for _ in range(100):
            pts = [Point(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)) for _ in range(3)]
            line = H.line_through(pts[0], pts[1])
            if H.incident(pts[2], line, 1e-6):
                continue
            assert H.intersect(H.hyperparallel_at_foot(pts[2], line), line) == []


class TestReflections:
    def test_point_in_line(self):
        assert approx_pt(H.reflect_point_in_line(Point(0.3, 0.4), X_AXIS), (0.3, -0.4))
        arc = Arc(Point(S2, 0), 1.0)
        assert approx_pt(H.reflect_point_in_line(Point(0, 0), arc), FROZEN["reflect_origin"])
        on = H.line_through(Point(0.1, 0.2), Point(0.3, -0.1))
        assert approx_pt(H.reflect_point_in_line(Point(0.1, 0.2), on), (0.1, 0.2))

    def test_line_in_point(self):
        assert H.same(H.reflect_line_in_point(X_AXIS, Point(0, 0)), X_AXIS)
        assert is_arc(H.reflect_line_in_point(X_AXIS, Point(0, 0.5)), *FROZEN["halfturn_x_axis"])
        img = E.reflect_line_in_point(Line.from_normal(0, 1, 0), Point(0, 1))
        assert E.same(img, Line.from_normal(0, 1, 2))

    def test_half_turn_is_two_reflections(self):
        p, m = H.line_through(Point(0.4, 0.1), Point(-0.2, 0.5)), Point(0.1, -0.2)
        l1 = H.line_through(m, Point(0.3, 0.3))
        l2 = H.perpendicular_through(m, l1)
        a, b = H.ideal_endpoints(p)
        # reflect two points of p twice and compare the resulting line
        q1 = H.reflect_point_in_line(H.reflect_point_in_line(Point(0.4, 0.1), l1), l2)
        q2 = H.reflect_point_in_line(H.reflect_point_in_line(Point(-0.2, 0.5), l1), l2)
        assert H.same(H.line_through(q1, q2), H.reflect_line_in_point(p, m), 1e-8)


class TestMeasures:
    def test_distance(self):
        assert abs(H.distance(Point(0, 0), Point(0.5, 0)) - FROZEN["dist_half"]) < 1e-12
        assert abs(H.distance(Point(0, 0), Point(0.6, 0)) - FROZEN["dist_06"]) < 1e-12
        assert H.distance(Point(0.3, 0.2), Point(0.3, 0.2)) == 0

    def test_angles(self):
        assert abs(H.angle_measure(Point(0, 0), Point(0.5, 0), Point(0, 0.5)) - math.pi / 2) < 1e-12
        assert abs(E.angle_measure(Point(0, 0), Point(1, 0), Point(1, 1)) - math.pi / 4) < 1e-12
        with pytest.raises(DegenerateAngle):
            E.angle_measure(Point(0, 0), Point(0, 0), Point(1, 1))


def test_coordinate_format_has_17_digits():
    assert fmt_float(1 / 3) == "0.33333333333333331"
    assert float(fmt_float(math.pi)) == math.pi
