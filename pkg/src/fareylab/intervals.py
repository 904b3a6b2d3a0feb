"""Closed intervals with exact rational endpoints.

Every quantity that depends on an irrational number (the limit slopes,
logarithms of model functions) is carried as an :class:`Interval` so that
comparisons either succeed with certainty or refuse to answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from mpmath.ctx_iv import MPIntervalContext


class PrecisionError(ArithmeticError):
    """An interval is too wide to decide the requested sign or comparison."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> Interval:
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def hull(cls, a, b) -> Interval:
        a, b = as_fraction(a), as_fraction(b)
        return cls(min(a, b), max(a, b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    def straddles_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __add__(self, other):
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> Interval:
        if self.straddles_zero():
            raise PrecisionError(f"cannot invert {self}: contains 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def max_with(self, other) -> Interval:
        other = _coerce(other)
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def certainly_lt(self, other) -> bool:
        return self.hi < _coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= _coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > _coerce(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= _coerce(other).hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def _mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    value = Fraction(int(man)) * Fraction(2) ** exp
    return -value if sign else value


def from_mpi(x) -> Interval:
    """Convert an ``mpmath.iv`` interval to exact rational endpoints."""
    a, b = x._mpi_
    return Interval(_mpf_to_fraction(a), _mpf_to_fraction(b))


@lru_cache(maxsize=None)
def _iv_context(prec: int) -> MPIntervalContext:
    """A private interval context, so the global mpmath precision is untouched."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def log_interval(x, prec: int = 128) -> Interval:
    """Certified enclosure of ``log(x)`` for a positive rational ``x``."""
    x = as_fraction(x)
    if x <= 0:
        raise ValueError("log of a nonpositive number")
    if x == 1:
        return Interval.point(0)
    ctx = _iv_context(prec)
    return from_mpi(ctx.log(ctx.mpf(x.numerator) / ctx.mpf(x.denominator)))


def exp_interval(x, prec: int = 128) -> Interval:
    """Certified enclosure of ``exp(x)`` for a rational ``x``."""
    x = as_fraction(x)
    if x == 0:
        return Interval.point(1)
    ctx = _iv_context(prec)
    return from_mpi(ctx.exp(ctx.mpf(x.numerator) / ctx.mpf(x.denominator)))


def round_to_grid(value, bits: int = 64) -> Fraction:
    """Round a real (rational or mpmath) to the nearest multiple of ``2**-bits``."""
    if isinstance(value, (int, Fraction)):
        return Fraction(round(Fraction(value) * (1 << bits)), 1 << bits)
    scaled = mpmath.nint(mpmath.mpf(value) * mpmath.mpf(2) ** bits)
    return Fraction(int(scaled), 1 << bits)


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if not den.strip():
            raise ValueError(f"malformed rational {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_interval(iv: Interval) -> str:
    return f"[{format_rational(iv.lo)}, {format_rational(iv.hi)}]"


def parse_interval(text: str) -> Interval:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"malformed interval {text!r}")
    lo, hi = body[1:-1].split(",")
    return Interval(parse_rational(lo), parse_rational(hi))
