"""Significant points of a triangle, computed in either model."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTriangle, GeometryError
from .geometry import Point, get_backend

LABELS = ("A", "B", "C", "O", "Ma", "Mb", "Mc", "G",
          "Ha", "Hb", "Hc", "H", "Ta", "Tb", "Tc", "I")

VERTEX_LINE = {"a": ("B", "C"), "b": ("C", "A"), "c": ("A", "B")}


@dataclass(frozen=True)
class TriangleInstance:
    A: Point
    B: Point
    C: Point
    geometry: str

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.A, self.B, self.C)


def _single(points, what):
    if len(points) != 1:
        return None
    return points[0]


def is_nondegenerate(t: TriangleInstance, min_side: float = 1e-3, min_angle: float = 1e-2) -> bool:
    geo = get_backend(t.geometry)
    a, b, c = t.vertices
    if t.geometry == "hyperbolic" and max(math.hypot(*p) for p in (a, b, c)) > 0.9 + 1e-12:
        return False
    if min(geo.distance(a, b), geo.distance(b, c), geo.distance(c, a)) <= min_side:
        return False
    try:
        angles = [geo.angle_measure(a, b, c), geo.angle_measure(b, c, a), geo.angle_measure(c, a, b)]
    except GeometryError:
        return False
    return min(angles) > min_angle and max(angles) < math.pi - min_angle


def significant_points(t: TriangleInstance) -> dict[str, Point]:
    """All 16 Wernick points; O and H are omitted when their pencil is not elliptic."""
    if not is_nondegenerate(t):
        raise DegenerateTriangle(f"degenerate triangle {t}")
    geo = get_backend(t.geometry)
    A, B, C = t.vertices
    pts = {"A": A, "B": B, "C": C}
    pts["Ma"] = geo.midpoint(B, C)
    pts["Mb"] = geo.midpoint(C, A)
    pts["Mc"] = geo.midpoint(A, B)
    a, b, c = geo.line_through(B, C), geo.line_through(C, A), geo.line_through(A, B)
    pts["G"] = _single(geo.intersect(geo.line_through(A, pts["Ma"]), geo.line_through(B, pts["Mb"])), "G")
    ha, hb = geo.perpendicular_through(A, a), geo.perpendicular_through(B, b)
    hc = geo.perpendicular_through(C, c)
    pts["Ha"] = _single(geo.intersect(ha, a), "Ha")
    pts["Hb"] = _single(geo.intersect(hb, b), "Hb")
    pts["Hc"] = _single(geo.intersect(hc, c), "Hc")
    sa, sb = geo.angle_bisector(B, A, C), geo.angle_bisector(C, B, A)
    sc = geo.angle_bisector(A, C, B)
    pts["Ta"] = _single(geo.intersect(sa, a), "Ta")
    pts["Tb"] = _single(geo.intersect(sb, b), "Tb")
    pts["Tc"] = _single(geo.intersect(sc, c), "Tc")
    pts["I"] = _single(geo.intersect(sa, sb), "I")
    ma, mb = geo.perp_bisector(B, C), geo.perp_bisector(C, A)
    pts["O"] = _single(geo.intersect(ma, mb), "O")
    pts["H"] = _single(geo.intersect(ha, hb), "H")
    missing = [k for k, v in pts.items() if v is None and k not in ("O", "H")]
    if missing:
        raise DegenerateTriangle(f"could not compute {missing}")
    return {k: pts[k] for k in LABELS if pts.get(k) is not None}
