"""Shared interface of the Euclidean and Poincare-disc backends."""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import CoincidentPoints, IdenticalObjects, UnsupportedInBackend
from . import _gcircle as gc
from .types import Arc, Circle, Diameter, Line, Point, is_point

EPS = 1e-9


class GeometryBackend:
    """Primitive constructions of absolute geometry on one model.

    Every method is a pure function of its arguments.
    """

    name = "abstract"
    # primitive-construction ids this backend can realise
    primitives: frozenset = frozenset()

    eps = EPS

    # --- support algebra -------------------------------------------------
    def gcircle(self, obj) -> gc.GCircle:
        if isinstance(obj, Line):
            return gc.GCircle.line(complex(*obj.normal), obj.offset)
        if isinstance(obj, Diameter):
            return gc.GCircle.line(complex(*obj.normal), 0.0)
        if isinstance(obj, Arc):
            return gc.GCircle.circle(obj.center.z, obj.radius)
        if isinstance(obj, Circle):
            return gc.GCircle.circle(obj.center.z, obj.radius)
        raise TypeError(f"not a curve: {obj!r}")

    def incident(self, p: Point, obj, tol: float = EPS) -> bool:
        return self.gcircle(obj).distance(p.z) <= tol

    def same(self, u, v, tol: float = EPS) -> bool:
        """Equality of two values of the same sort within ``tol``."""
        return self.gap(u, v) <= tol

    def gap(self, u, v) -> float:
        """Distance-like mismatch of two values; infinite across sorts."""
        if is_point(u) or is_point(v):
            return math.dist(u, v) if is_point(u) and is_point(v) else math.inf
        if isinstance(u, Circle) != isinstance(v, Circle):
            return math.inf
        g, h = self.gcircle(u).normalized(), self.gcircle(v).normalized()
        if g.is_line != h.is_line:
            return math.inf
        if g.is_line:
            return min(max(abs(g.b - s * h.b), abs(g.c - s * h.c)) for s in (1.0, -1.0))
        return max(abs(g.center - h.center), abs(g.radius - h.radius))

    def _check_distinct(self, x: Point, y: Point) -> None:
        if math.dist(x, y) <= self.eps:
            raise CoincidentPoints(f"{x} and {y} coincide")

    def _check_not_identical(self, a, b) -> None:
        if self.same(a, b):
            raise IdenticalObjects("cannot intersect an object with itself")

    def in_model(self, p: Point) -> bool:
        return True

    def intersect(self, a, b) -> list[Point]:
        """Intersection points, sorted lexicographically by (x, y)."""
        self._check_not_identical(a, b)
        pts = gc.intersect(self.gcircle(a), self.gcircle(b))
        out = sorted({(z.real, z.imag) for z in pts})
        return [Point(x + 0.0, y + 0.0) for x, y in out if self.in_model(Point(x, y))]

    # --- optional primitives --------------------------------------------
    def ratio_point(self, x: Point, z: Point, w: Point, r: Fraction) -> Point:
        raise UnsupportedInBackend(f"ratio_point is not available in {self.name}")

    def parallel_through(self, p: Point, line):
        raise UnsupportedInBackend(f"parallel_through is not available in {self.name}")

    def limiting_parallel(self, p: Point, line, direction):
        raise UnsupportedInBackend(f"limiting_parallel is not available in {self.name}")

    def hyperparallel_at_foot(self, p: Point, line):
        raise UnsupportedInBackend(f"hyperparallel_at_foot is not available in {self.name}")
