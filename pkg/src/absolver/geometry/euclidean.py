"""Euclidean plane backend."""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import CoincidentPoints, DegenerateAngle
from .base import EPS, GeometryBackend
from .types import Circle, Line, Point


def _unit(dx: float, dy: float) -> tuple[float, float]:
    n = math.hypot(dx, dy)
    return dx / n, dy / n


class EuclideanPlane(GeometryBackend):
    name = "euclidean"
    primitives = frozenset({"1", "2", "3", "4", "5", "6", "7", "7a", "7b", "8", "9"})

    def line_through(self, x: Point, y: Point) -> Line:
        self._check_distinct(x, y)
        dx, dy = _unit(y.x - x.x, y.y - x.y)
        return Line.from_normal(-dy, dx, -dy * x.x + dx * x.y)

    def circle_center_point(self, x: Point, y: Point) -> Circle:
        self._check_distinct(x, y)
        return Circle(x, y, x, math.dist(x, y))

    def perpendicular_through(self, p: Point, line: Line) -> Line:
        dx, dy = line.direction
        return Line.from_normal(dx, dy, dx * p.x + dy * p.y)

    def perp_bisector(self, x: Point, y: Point) -> Line:
        self._check_distinct(x, y)
        return self.perpendicular_through(self.midpoint(x, y), self.line_through(x, y))

    def angle_bisector(self, x: Point, v: Point, y: Point) -> Line:
        if math.dist(x, v) <= EPS or math.dist(y, v) <= EPS:
            raise DegenerateAngle("angle arm has zero length")
        ux, uy = _unit(x.x - v.x, x.y - v.y)
        wx, wy = _unit(y.x - v.x, y.y - v.y)
        if abs(ux * wy - uy * wx) <= EPS:
            raise DegenerateAngle("angle arms are collinear")
        dx, dy = ux + wx, uy + wy
        return self.line_through(v, Point(v.x + dx, v.y + dy))

    def midpoint(self, x: Point, y: Point) -> Point:
        return Point((x.x + y.x) / 2, (x.y + y.y) / 2)

    def symmetric_point(self, x: Point, m: Point) -> Point:
        return Point(2 * m.x - x.x, 2 * m.y - x.y)

    def ratio_point(self, x: Point, z: Point, w: Point, r: Fraction) -> Point:
        """Point ``Y`` with ``vec(XY) = r * vec(ZW)``."""
        if math.dist(z, w) <= EPS:
            raise CoincidentPoints("ratio base vector has zero length")
        r = float(Fraction(r))
        return Point(x.x + r * (w.x - z.x), x.y + r * (w.y - z.y))

    def parallel_through(self, p: Point, line: Line) -> Line:
        nx, ny = line.normal
        return Line.from_normal(nx, ny, nx * p.x + ny * p.y)

    def reflect_point_in_line(self, p: Point, m: Line) -> Point:
        nx, ny = m.normal
        s = nx * p.x + ny * p.y - m.offset
        return Point(p.x - 2 * s * nx, p.y - 2 * s * ny)

    def reflect_line_in_point(self, p: Line, m: Point) -> Line:
        nx, ny = p.normal
        return Line.from_normal(nx, ny, 2 * (nx * m.x + ny * m.y) - p.offset)

    def distance(self, p: Point, q: Point) -> float:
        return math.dist(p, q)

    def angle_measure(self, v: Point, a: Point, b: Point) -> float:
        if math.dist(a, v) <= EPS or math.dist(b, v) <= EPS:
            raise DegenerateAngle("angle arm has zero length")
        ax, ay = a.x - v.x, a.y - v.y
        bx, by = b.x - v.x, b.y - v.y
        return abs(math.atan2(ax * by - ay * bx, ax * bx + ay * by))
