"""Immutable geometric values shared by both models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union


class Point(NamedTuple):
    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "Point":
        return cls(float(z.real), float(z.imag))


@dataclass(frozen=True)
class Line:
    """Straight line ``normal . p == offset`` with a unit normal.

    In the Poincare disc a line through the origin is a diameter; see
    :class:`Diameter`.
    """

    normal: tuple[float, float]
    offset: float

    @classmethod
    def from_normal(cls, nx: float, ny: float, offset: float) -> "Line":
        n = math.hypot(nx, ny)
        nx, ny, offset = nx / n, ny / n, offset / n
        # canonical sign so that equal lines compare equal
        if nx < -1e-15 or (abs(nx) <= 1e-15 and ny < 0):
            nx, ny, offset = -nx, -ny, -offset
        return cls((nx + 0.0, ny + 0.0), offset + 0.0)

    @property
    def direction(self) -> tuple[float, float]:
        return (-self.normal[1], self.normal[0])


@dataclass(frozen=True)
class Diameter:
    """h-line through the centre of the disc, given by a unit direction."""

    direction: tuple[float, float]

    @classmethod
    def from_direction(cls, dx: float, dy: float) -> "Diameter":
        n = math.hypot(dx, dy)
        dx, dy = dx / n, dy / n
        if dx < -1e-15 or (abs(dx) <= 1e-15 and dy < 0):
            dx, dy = -dx, -dy
        return cls((dx + 0.0, dy + 0.0))

    @property
    def normal(self) -> tuple[float, float]:
        return (-self.direction[1], self.direction[0])

    @property
    def offset(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Arc:
    """h-line drawn as a Euclidean circle orthogonal to the unit circle."""

    center: Point
    radius: float


@dataclass(frozen=True)
class Circle:
    """Circle with a model centre ``hcenter`` through ``through``.

    ``center``/``radius`` describe the Euclidean support; in the disc they
    generally differ from the hyperbolic centre.
    """

    hcenter: Point
    through: Point
    center: Point
    radius: float


@dataclass(frozen=True)
class Direction:
    """Ideal point (disc) or unit vector (plane) selecting a parallel."""

    ideal: tuple[float, float]

    @classmethod
    def of(cls, x: float, y: float) -> "Direction":
        n = math.hypot(x, y)
        return cls((x / n, y / n))


HLine = Union[Diameter, Arc]
AnyLine = Union[Line, Diameter, Arc]
GeoValue = Union[Point, Line, Diameter, Arc, Circle]


def is_line(obj) -> bool:
    return isinstance(obj, (Line, Diameter, Arc))


def is_circle(obj) -> bool:
    return isinstance(obj, Circle)


def is_point(obj) -> bool:
    return isinstance(obj, Point)


def fmt_float(v: float) -> str:
    """17 significant digits, the serialization format for coordinates."""
    return format(v, ".17g")
