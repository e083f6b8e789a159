from .base import EPS, GeometryBackend
from .euclidean import EuclideanPlane
from .hyperbolic import BOUNDARY_EPS, PoincareDisc
from .types import (
    Arc,
    Circle,
    Diameter,
    Direction,
    Line,
    Point,
    fmt_float,
    is_circle,
    is_line,
    is_point,
)

EUCLIDEAN = EuclideanPlane()
HYPERBOLIC = PoincareDisc()

GEOMETRIES = ("euclidean", "hyperbolic")


def get_backend(geometry: str) -> GeometryBackend:
    if geometry == "euclidean":
        return EUCLIDEAN
    if geometry == "hyperbolic":
        return HYPERBOLIC
    raise ValueError(f"unknown geometry {geometry!r}")


__all__ = [
    "Arc", "BOUNDARY_EPS", "Circle", "Diameter", "Direction", "EPS", "EUCLIDEAN",
    "EuclideanPlane", "GEOMETRIES", "GeometryBackend", "HYPERBOLIC", "Line",
    "Point", "PoincareDisc", "fmt_float", "get_backend", "is_circle", "is_line",
    "is_point",
]
