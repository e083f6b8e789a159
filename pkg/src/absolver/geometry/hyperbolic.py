"""Poincare disc backend.

h-lines are diameters or arcs orthogonal to the unit circle; every
construction moves a convenient point to the origin with a disc
automorphism, solves the trivial case there, and maps back.
"""

from __future__ import annotations

import cmath
import math

from ..errors import (
    DegenerateAngle,
    DirectionNotIdealEnd,
    PointOnLine,
    ResultOutsideModel,
)
from . import _gcircle as gc
from .base import EPS, GeometryBackend
from .types import Arc, Circle, Diameter, Direction, Point

BOUNDARY_EPS = 1e-6
HALF_TURN = gc.Mobius((-1.0 + 0j, 0j, 0j, 1.0 + 0j))


def _diameter_g(direction: complex) -> gc.GCircle:
    return gc.GCircle.line(direction * 1j / abs(direction), 0.0)


class PoincareDisc(GeometryBackend):
    name = "hyperbolic"
    primitives = frozenset({"1", "2", "3", "4", "5", "6a", "6b", "7a", "7b", "8", "9"})

    def in_model(self, p: Point) -> bool:
        return p.x * p.x + p.y * p.y < 1.0 - BOUNDARY_EPS

    def _hline(self, g: gc.GCircle):
        g = g.normalized()
        if g.is_line:
            n = g.line_normal
            return Diameter.from_direction(-n.imag, n.real)
        c = g.center
        # re-impose orthogonality to the absolute
        r = math.sqrt(max(abs(c) ** 2 - 1.0, 0.0))
        return Arc(Point.from_complex(c), r)

    def _point(self, z: complex) -> Point:
        p = Point.from_complex(z)
        if not abs(z) < 1.0:
            raise ResultOutsideModel(f"{p} lies outside the disc")
        return p

    # --- primitives -------------------------------------------------------
    def line_through(self, x: Point, y: Point):
        self._check_distinct(x, y)
        t = gc.Mobius.to_origin(x.z)
        return self._hline(_diameter_g(t(y.z)).transform(t.inverse()))

    def circle_center_point(self, x: Point, y: Point) -> Circle:
        self._check_distinct(x, y)
        t = gc.Mobius.to_origin(x.z)
        g = gc.GCircle.circle(0j, abs(t(y.z))).transform(t.inverse())
        return Circle(x, y, Point.from_complex(g.center), g.radius)

    def perpendicular_through(self, p: Point, line):
        t = gc.Mobius.to_origin(p.z)
        g = self.gcircle(line).transform(t)
        if g.is_line:
            # p lies on the line: rotate its direction by a right angle
            direction = g.line_normal
        else:
            direction = g.center
        return self._hline(_diameter_g(direction).transform(t.inverse()))

    def perp_bisector(self, x: Point, y: Point):
        self._check_distinct(x, y)
        return self.perpendicular_through(self.midpoint(x, y), self.line_through(x, y))

    def angle_bisector(self, x: Point, v: Point, y: Point):
        if math.dist(x, v) <= EPS or math.dist(y, v) <= EPS:
            raise DegenerateAngle("angle arm has zero length")
        t = gc.Mobius.to_origin(v.z)
        a, b = t(x.z), t(y.z)
        ua, ub = a / abs(a), b / abs(b)
        if abs((ua.conjugate() * ub).imag) <= EPS:
            raise DegenerateAngle("angle arms are collinear")
        return self._hline(_diameter_g(ua + ub).transform(t.inverse()))

    def midpoint(self, x: Point, y: Point) -> Point:
        t = gc.Mobius.to_origin(x.z)
        w = t(y.z)
        if abs(w) <= 1e-15:
            return x
        rho = math.tanh(math.atanh(abs(w)) / 2.0)
        return self._point(t.inverse()(w / abs(w) * rho))

    def half_turn(self, m: Point) -> gc.Mobius:
        t = gc.Mobius.to_origin(m.z)
        return t.inverse() @ HALF_TURN @ t

    def symmetric_point(self, x: Point, m: Point) -> Point:
        return self._point(self.half_turn(m)(x.z))

    def limiting_parallel(self, p: Point, line, direction: Direction):
        if self.incident(p, line):
            raise PointOnLine(f"{p} lies on the line")
        d = complex(*direction.ideal)
        if min((abs(d - e.z) for e in self.ideal_endpoints(line)), default=1.0) > 1e-7:
            raise DirectionNotIdealEnd(f"{direction} is not an end of the line")
        t = gc.Mobius.to_origin(p.z)
        return self._hline(_diameter_g(t(d)).transform(t.inverse()))

    def hyperparallel_at_foot(self, p: Point, line):
        if self.incident(p, line):
            raise PointOnLine(f"{p} lies on the line")
        n = self.perpendicular_through(p, line)
        return self.perpendicular_through(p, n)

    def reflect_point_in_line(self, p: Point, m) -> Point:
        return self._point(self.gcircle(m).invert(p.z))

    def reflect_line_in_point(self, line, m: Point):
        return self._hline(self.gcircle(line).transform(self.half_turn(m)))

    def distance(self, p: Point, q: Point) -> float:
        d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
        den = (1.0 - p.x * p.x - p.y * p.y) * (1.0 - q.x * q.x - q.y * q.y)
        return math.acosh(1.0 + 2.0 * d2 / den)

    def angle_measure(self, v: Point, a: Point, b: Point) -> float:
        if math.dist(a, v) <= EPS or math.dist(b, v) <= EPS:
            raise DegenerateAngle("angle arm has zero length")
        t = gc.Mobius.to_origin(v.z)
        return abs(cmath.phase(t(b.z) / t(a.z)))

    def gap(self, u, v) -> float:
        # h-lines are compared by their ends on the absolute, which stays
        # well conditioned for nearly straight arcs
        hl = (Diameter, Arc)
        if isinstance(u, hl) and isinstance(v, hl):
            (a, b), (c, d) = self.ideal_endpoints(u), self.ideal_endpoints(v)
            return min(max(math.dist(a, c), math.dist(b, d)), max(math.dist(a, d), math.dist(b, c)))
        return super().gap(u, v)

    # --- model helpers ----------------------------------------------------
    def ideal_endpoints(self, line) -> list[Point]:
        """The two points where the h-line meets the absolute."""
        unit = gc.GCircle.circle(0j, 1.0)
        pts = gc.intersect(self.gcircle(line), unit)
        return [Point(z.real + 0.0, z.imag + 0.0) for z in sorted(pts, key=lambda z: (z.real, z.imag))]

    def tangent_at(self, line, p: Point) -> complex:
        """Unit tangent direction of a curve at one of its points."""
        g = self.gcircle(line).normalized()
        if g.is_line:
            return g.line_normal * 1j
        r = p.z - g.center
        return r * 1j / abs(r)
