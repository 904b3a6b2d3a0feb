"""Curves and arcs on the once-punctured torus.

A simple closed curve is named by a reduced pair ``p/q`` (reciprocal-slope
coordinates, ``q >= 0``); the same pair is its primitive homology vector.
Arcs are relative homology classes ``(a, b)`` and need not be primitive.
All pairings are the absolute algebraic intersection ``|x*q - y*p|``, which
on the punctured torus equals the geometric intersection number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> Slope:
        num, _, den = text.strip().partition("/")
        return cls(int(num), int(den) if den else 1)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def value(self) -> Fraction:
        if self.q == 0:
            raise ValueError("1/0 has no finite value")
        return Fraction(self.p, self.q)

    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


@dataclass(frozen=True)
class ArcClass:
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        if self.a == 0 and self.b == 0:
            raise ValueError("arc class (0, 0) is not allowed")

    def vector(self) -> tuple[int, int]:
        return (self.a, self.b)


Target = Union[Slope, ArcClass]


def algebraic_intersection(v: tuple[int, int], w: tuple[int, int]) -> int:
    """Signed pairing ``<v, w> = v_x * w_y - v_y * w_x``."""
    return v[0] * w[1] - v[1] * w[0]


def farey_adjacent(u: Slope, v: Slope) -> bool:
    return abs(u.p * v.q - v.p * u.q) == 1


def intersection_slopes(u: Slope, v: Slope) -> int:
    return abs(algebraic_intersection(u.vector(), v.vector()))


def intersection_arc_curve(arc: ArcClass, v: Slope) -> int:
    return abs(arc.a * v.q - arc.b * v.p)


def dehn_twist(about: Slope, target: Target, power: int) -> Target:
    """Apply the ``power``-th Dehn twist about ``about`` to a curve or arc.

    Acts on homology by Picard-Lefschetz: ``v + power * <v, g> * g``.
    """
    g = about.vector()
    v = target.vector()
    n = power * algebraic_intersection(v, g)
    x, y = v[0] + n * g[0], v[1] + n * g[1]
    if isinstance(target, Slope):
        return Slope(x, y)
    return ArcClass(x, y)
