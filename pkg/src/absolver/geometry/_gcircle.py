"""Generalized circles ``a|z|^2 + 2 Re(conj(b) z) + c = 0`` and Moebius maps.

Lines are the ``a == 0`` case. Moebius maps act on the Hermitian matrix
``[[a, b], [conj(b), c]]`` by congruence with the inverse map.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

# |b| > SNAP * |a| means the circle centre is beyond 1e6: treat as a line
SNAP = 1e6


@dataclass(frozen=True)
class GCircle:
    a: float
    b: complex
    c: float

    @classmethod
    def circle(cls, center: complex, radius: float) -> "GCircle":
        return cls(1.0, -center, abs(center) ** 2 - radius * radius)

    @classmethod
    def line(cls, normal: complex, offset: float) -> "GCircle":
        # Re(conj(n) z) = offset
        return cls(0.0, normal / 2.0, -offset)

    @property
    def is_line(self) -> bool:
        return self.a == 0.0 or abs(self.a) * SNAP <= abs(self.b)

    def normalized(self) -> "GCircle":
        if self.is_line:
            n = abs(self.b) * 2.0
            return GCircle(0.0, self.b / n, self.c / n)
        return GCircle(1.0, self.b / self.a, self.c / self.a)

    @property
    def center(self) -> complex:
        return -self.b / self.a

    @property
    def radius(self) -> float:
        r2 = abs(self.b / self.a) ** 2 - self.c / self.a
        return math.sqrt(max(r2, 0.0))

    @property
    def line_normal(self) -> complex:
        return self.b / abs(self.b)

    @property
    def line_offset(self) -> float:
        # 2 Re(conj(b) z) + c = 0  ->  Re(conj(b/|b|) z) = -c / (2|b|)
        return -self.c / (2.0 * abs(self.b))

    def distance(self, z: complex) -> float:
        """Euclidean distance from ``z`` to the support curve."""
        if self.is_line:
            n = self.line_normal
            return abs((n.conjugate() * z).real - self.line_offset)
        return abs(abs(z - self.center) - self.radius)

    def transform(self, m: "Mobius") -> "GCircle":
        n11, n12, n21, n22 = m.inverse().coeffs
        a, b, c = self.a, self.b, self.c
        # H' = N^H H N with H = [[a, b], [conj b, c]]
        h11 = a * n11 + b * n21
        h12 = a * n12 + b * n22
        h21 = b.conjugate() * n11 + c * n21
        h22 = b.conjugate() * n12 + c * n22
        a2 = n11.conjugate() * h11 + n21.conjugate() * h21
        b2 = n11.conjugate() * h12 + n21.conjugate() * h22
        c2 = n12.conjugate() * h12 + n22.conjugate() * h22
        return GCircle(a2.real, b2, c2.real).normalized()

    def invert(self, z: complex) -> complex:
        """Reflection (inversion) of ``z`` in this generalized circle."""
        if self.is_line:
            n = self.line_normal
            s = (n.conjugate() * z).real - self.line_offset
            return z - 2.0 * s * n
        m, r = self.center, self.radius
        d = z - m
        return m + r * r / d.conjugate()


@dataclass(frozen=True)
class Mobius:
    coeffs: tuple[complex, complex, complex, complex]

    def __call__(self, z: complex) -> complex:
        p, q, r, s = self.coeffs
        return (p * z + q) / (r * z + s)

    def inverse(self) -> "Mobius":
        p, q, r, s = self.coeffs
        return Mobius((s, -q, -r, p))

    def __matmul__(self, other: "Mobius") -> "Mobius":
        p1, q1, r1, s1 = self.coeffs
        p2, q2, r2, s2 = other.coeffs
        return Mobius((p1 * p2 + q1 * r2, p1 * q2 + q1 * s2,
                       r1 * p2 + s1 * r2, r1 * q2 + s1 * s2))

    @classmethod
    def to_origin(cls, a: complex) -> "Mobius":
        """Disc automorphism sending ``a`` to 0."""
        return cls((1.0 + 0j, -a, -a.conjugate(), 1.0 + 0j))

    @classmethod
    def rotation(cls, angle: float) -> "Mobius":
        return cls((cmath.exp(1j * angle), 0j, 0j, 1.0 + 0j))


def intersect(g1: GCircle, g2: GCircle, tol: float = 1e-12) -> list[complex]:
    """Euclidean intersection points of two generalized circles."""
    if g1.is_line and g2.is_line:
        n1, d1 = g1.line_normal, g1.line_offset
        n2, d2 = g2.line_normal, g2.line_offset
        det = n1.real * n2.imag - n1.imag * n2.real
        if abs(det) < 1e-14:
            return []
        x = (d1 * n2.imag - d2 * n1.imag) / det
        y = (n1.real * d2 - n2.real * d1) / det
        return [complex(x, y)]
    if g1.is_line:
        return _line_circle(g1, g2, tol)
    if g2.is_line:
        return _line_circle(g2, g1, tol)
    # radical axis of two proper circles
    h1, h2 = g1.normalized(), g2.normalized()
    db = h1.b - h2.b
    if abs(db) < 1e-15:
        return []
    radical = GCircle(0.0, db, h1.c - h2.c).normalized()
    return _line_circle(radical, h1, tol)


def _line_circle(line: GCircle, circ: GCircle, tol: float) -> list[complex]:
    n, d = line.line_normal, line.line_offset
    m, r = circ.center, circ.radius
    s = (n.conjugate() * m).real - d
    foot = m - s * n
    h2 = r * r - s * s
    if h2 < -tol * max(1.0, r * r):
        return []
    if h2 <= tol * max(1.0, r * r):
        return [foot]
    h = math.sqrt(h2)
    t = n * 1j
    return [foot + h * t, foot - h * t]
