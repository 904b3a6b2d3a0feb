"""Continued fractions ``x = [0; e_0, e_1, ...]`` with coefficients >= 4.

Convergent ``j`` is ``p_j/q_j = [0; e_0, ..., e_{j-1}]``; in particular
``p_0/q_0 = 0/1`` and ``p_1/q_1 = 1/e_0``.  The limit ``x`` itself is never
materialized as a float; :func:`value_interval` gives rational enclosures.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .curve_algebra import Slope, dehn_twist
from .intervals import Interval

MIN_COEFFICIENT = 4
DEFAULT_CAP_DIGITS = 10**6
CONTINUANT_ORACLE_LIMIT = 20

_LOG2_10 = math.log2(10)


class CoefficientCapError(OverflowError):
    """A coefficient exceeded the configured number of decimal digits."""


def cap_digits() -> int:
    raw = os.environ.get("FAREYLAB_CAP_DIGITS")
    if raw is None:
        return DEFAULT_CAP_DIGITS
    value = int(raw)
    if value < 1:
        raise ValueError("FAREYLAB_CAP_DIGITS must be positive")
    return value


def exceeds_digits(n: int, digits: int) -> bool:
    """True iff ``|n|`` has more than ``digits`` decimal digits."""
    n = abs(n)
    bits = n.bit_length()
    if bits <= (digits - 1) * _LOG2_10:
        return False
    if bits > digits * _LOG2_10 + 1:
        return True
    return n >= 10**digits


def check_cap(e: int, index, digits: int | None = None) -> None:
    digits = cap_digits() if digits is None else digits
    if exceeds_digits(e, digits):
        raise CoefficientCapError(
            f"coefficient e_{index} has more than {digits} decimal digits")


@dataclass(frozen=True)
class CFSide:
    coeffs: tuple[int, ...]
    side: int = 0

    def __post_init__(self):
        coeffs = tuple(int(e) for e in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.side not in (0, 1):
            raise ValueError(f"side must be 0 or 1, got {self.side}")
        for j, e in enumerate(coeffs):
            if e < MIN_COEFFICIENT:
                raise ValueError(
                    f"coefficient e_{j} = {e} violates e >= {MIN_COEFFICIENT}")

    def __len__(self):
        return len(self.coeffs)

    @cached_property
    def _table(self) -> tuple[tuple[int, int], ...]:
        pairs = [(0, 1)]
        p_prev, q_prev, p, q = 1, 0, 0, 1
        for e in self.coeffs:
            p_prev, q_prev, p, q = p, q, e * p + p_prev, e * q + q_prev
            pairs.append((p, q))
        return tuple(pairs)

    def convergent(self, i: int) -> tuple[int, int]:
        _check_index(self, i)
        return self._table[i]

    def curve(self, i: int) -> Slope:
        """The curve gamma_i; ``curve(-1)`` is the horizontal curve 1/0."""
        if i == -1:
            return Slope(1, 0)
        return Slope(*self.convergent(i))

    def curves(self, upto: int) -> list[Slope]:
        """``[gamma_{-1}, gamma_0, ..., gamma_upto]``."""
        return [self.curve(i) for i in range(-1, upto + 1)]


def _check_index(side: CFSide, i: int) -> None:
    if not 0 <= i <= len(side.coeffs):
        raise IndexError(
            f"index {i} out of range for {len(side.coeffs)} coefficients")


def convergents(side: CFSide, upto: int) -> list[tuple[int, int]]:
    _check_index(side, upto)
    return list(side._table[: upto + 1])


def continuant_terms(n: int) -> Iterator[tuple[int, ...]]:
    """Index sets left after deleting disjoint adjacent pairs from ``range(n)``."""
    if n <= 0:
        yield ()
        return
    # index n-1 is either kept, or deleted together with n-2
    for rest in continuant_terms(n - 1):
        yield rest + (n - 1,)
    if n >= 2:
        yield from continuant_terms(n - 2)


def continuant_oracle(side: CFSide, i: int) -> int:
    """``q_i`` by explicit enumeration of the continuant subset family."""
    _check_index(side, i)
    if i > CONTINUANT_ORACLE_LIMIT:
        raise ValueError(
            f"enumeration refused for i = {i} > {CONTINUANT_ORACLE_LIMIT}")
    return sum(math.prod(side.coeffs[j] for j in subset)
               for subset in continuant_terms(i))


def I_of(side: CFSide, i: int) -> int:  # noqa: N802
    """Sum over all subsets J of {0..i-1} of prod e_j, i.e. prod (1 + e_j)."""
    _check_index(side, i)
    return math.prod(1 + e for e in side.coeffs[:i])


def value_interval(side: CFSide, i: int) -> Interval:
    """Rational enclosure of ``x = [0; e_0, e_1, ...]`` of width <= 1/q_i**2.

    Only ``e_0..e_{i-1}`` are used: ``x = (p_i y + p_{i-1})/(q_i y + q_{i-1})``
    for a tail ``y >= 1``, so ``x`` lies between ``p_i/q_i`` and the mediant
    ``(p_i + p_{i-1})/(q_i + q_{i-1})``.
    """
    if i < 1:
        raise ValueError("precision index must be >= 1")
    if i > len(side.coeffs):
        raise IndexError(
            f"precision index {i} needs {i} coefficients, have {len(side.coeffs)}")
    p_prev, q_prev = side._table[i - 1]
    p, q = side._table[i]
    return Interval.hull(Fraction(p, q), Fraction(p + p_prev, q + q_prev))


def twist_signs(coeffs: Sequence[int]) -> list[int]:
    """Sign ``s_j`` with ``gamma_{j+1} = D_{gamma_j}^{s_j e_j}(gamma_{j-1})``.

    Both signs are tried at every step; exactly one reproduces the convergent.
    """
    side = CFSide(tuple(coeffs))
    signs = []
    for j, e in enumerate(side.coeffs):
        prev, here, nxt = side.curve(j - 1), side.curve(j), side.curve(j + 1)
        matches = [s for s in (1, -1) if dehn_twist(here, prev, s * e) == nxt]
        if len(matches) != 1:
            raise ArithmeticError(f"no unique twist sign at step {j}: {matches}")
        signs.append(matches[0])
    return signs
