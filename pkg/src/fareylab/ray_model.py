"""Coarse model of curve lengths along the ray.

On ``[t'_k, t'_{k+1})`` the short pants curves are ``gamma_k``, ``gamma_{k+1}``
and ``alpha``.  A curve's length is expanded over them as
``sum_i i(delta, c_i) (w_i + l_i tw_i) + c_O * sum_i i(delta, c_i)`` with model
values for the lengths and twists.  Everything returned is an exact rational;
transcendental constants are rounded once to the 2^-64 grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import mpmath

from .intervals import as_fraction, round_to_grid
from .pairing import TestCurve, pair_delta_gamma
from .schedule import GrowthSchedule

INTERP_LAWS = ("calibrated", "geometric")
_WORK_PREC = 256


@dataclass(frozen=True)
class ModelParams:
    ell_active: Fraction = Fraction(1)
    c_O: Fraction = Fraction(1)  # noqa: N815
    twist_offset: int = 0
    interp: str = "calibrated"

    def __post_init__(self):
        object.__setattr__(self, "ell_active", as_fraction(self.ell_active))
        object.__setattr__(self, "c_O", as_fraction(self.c_O))
        object.__setattr__(self, "twist_offset", int(self.twist_offset))
        if self.ell_active <= 0:
            raise ValueError("ell_active must be positive")
        if self.c_O < 0:
            raise ValueError("c_O must be nonnegative")
        if self.interp not in INTERP_LAWS:
            raise ValueError(f"interp must be one of {INTERP_LAWS}")


@dataclass(frozen=True)
class LengthTerms:
    """The pieces of one length expansion."""

    gamma_k: Fraction
    gamma_k1: Fraction
    alpha: Fraction
    error: Fraction

    @property
    def total(self) -> Fraction:
        return self.gamma_k + self.gamma_k1 + self.alpha + self.error


@dataclass(frozen=True)
class RaySample:
    s: Fraction
    k: int
    lengths: Mapping[str, Fraction] = field(hash=False)
    x: Fraction
    y: Fraction


def active_index(s, schedule: GrowthSchedule) -> int:
    """The ``k >= 2`` with ``t'_k <= s < t'_{k+1}``."""
    s = as_fraction(s)
    if s < schedule.tm(2):
        raise ValueError(f"s = {s} precedes the first modeled interval t'_2 = {schedule.tm(2)}")
    # t'_k = (2k + 3) D / 4 is linear in k
    k = int((4 * s / schedule.D - 3) // 2)
    while schedule.tm(k) > s:
        k -= 1
    while schedule.tm(k + 1) <= s:
        k += 1
    if k > schedule.kmax:
        raise ValueError(f"s = {s} lies beyond the last modeled interval (kmax = {schedule.kmax})")
    return k


@lru_cache(maxsize=4096)
def width_of(length) -> Fraction:
    """Collar width ``2 asinh(1 / sinh(l/2))`` on the 2^-64 grid."""
    length = as_fraction(length)
    if length <= 0:
        raise ValueError("length must be positive")
    with mpmath.workprec(_WORK_PREC):
        half = mpmath.mpf(length.numerator) / (2 * length.denominator)
        w = 2 * mpmath.asinh(1 / mpmath.sinh(half))
        return round_to_grid(w)


def interval_theta(s, k: int, schedule: GrowthSchedule) -> Fraction:
    lo, hi = schedule.tm(k), schedule.tm(k + 1)
    return (as_fraction(s) - lo) / (hi - lo)


def twist_gamma_k(delta: TestCurve, s, schedule: GrowthSchedule, params: ModelParams) -> int:
    """Twist about the long-active curve: constant ``e_k + offset`` on the interval."""
    k = active_index(s, schedule)
    return schedule.e(k) + params.twist_offset


def twist_gamma_k1(delta: TestCurve, s, schedule: GrowthSchedule,
                   params: ModelParams) -> Fraction:
    """Twist about ``gamma_{k+1}``: 1 at ``t'_k``, rising towards ``e_{k+1}``.

    ``geometric``: ``e_{k+1}^theta`` (rounded to the 2^-64 grid).
    ``calibrated``: ``(e_k + offset) * (q(gamma_k)/q(gamma_{k+1})) * theta/(1-theta)``,
    which keeps the two active terms in the fixed ratio ``(1-theta) : theta``.
    Both are clamped to ``[1, e_{k+1}]``.
    """
    k = active_index(s, schedule)
    return _twist_k1(k, interval_theta(s, k, schedule), schedule, params)


def _twist_k1(k: int, theta: Fraction, schedule: GrowthSchedule, params: ModelParams) -> Fraction:
    top = Fraction(schedule.e(k + 1))
    if theta == 0:
        return Fraction(1)
    if params.interp == "geometric":
        with mpmath.workprec(_WORK_PREC):
            tw = round_to_grid(mpmath.power(int(top), mpmath.mpf(theta.numerator) / theta.denominator))
    else:
        ratio = Fraction(schedule.gamma(k).q, schedule.gamma(k + 1).q)
        tw = (schedule.e(k) + params.twist_offset) * ratio * theta / (1 - theta)
    return min(max(tw, Fraction(1)), top)


def length_terms(delta: TestCurve, s, schedule: GrowthSchedule,
                 params: ModelParams) -> LengthTerms:
    s = as_fraction(s)
    k = active_index(s, schedule)
    i_k = pair_delta_gamma(delta, k, schedule)
    i_k1 = pair_delta_gamma(delta, k + 1, schedule)
    i_a = delta.i_alpha
    if i_a == 0:
        raise ValueError(f"{delta.id} misses alpha")
    ell = params.ell_active
    w_a = width_of(ell)
    tw_k = schedule.e(k) + params.twist_offset
    tw_k1 = _twist_k1(k, interval_theta(s, k, schedule), schedule, params)
    ell_alpha = schedule.f1.value(s)
    w_alpha = width_of(ell_alpha)
    return LengthTerms(
        gamma_k=i_k * (w_a + ell * tw_k),
        gamma_k1=i_k1 * (w_a + ell * tw_k1),
        alpha=i_a * (w_alpha + ell_alpha * schedule.f2.value(s)),
        error=params.c_O * (i_k + i_k1 + i_a),
    )


def length_of(delta: TestCurve, s, schedule: GrowthSchedule, params: ModelParams) -> Fraction:
    return length_terms(delta, s, schedule, params).total


def xy_of(s, schedule: GrowthSchedule, params: ModelParams) -> tuple[Fraction, Fraction]:
    """Per-crossing contributions of ``gamma_k`` and ``gamma_{k+1}``."""
    s = as_fraction(s)
    k = active_index(s, schedule)
    ell = params.ell_active
    w_a = width_of(ell)
    tw_k1 = _twist_k1(k, interval_theta(s, k, schedule), schedule, params)
    return w_a + ell * (schedule.e(k) + params.twist_offset), w_a + ell * tw_k1


def sample(s, schedule: GrowthSchedule, family: Sequence[TestCurve],
           params: ModelParams) -> RaySample:
    s = as_fraction(s)
    k = active_index(s, schedule)
    lengths = {d.id: length_of(d, s, schedule, params) for d in family}
    x, y = xy_of(s, schedule, params)
    return RaySample(s, k, lengths, x, y)


def sweep_time(k: int, theta, schedule: GrowthSchedule) -> Fraction:
    """``t'_k + theta (t'_{k+1} - t'_k)``."""
    theta = as_fraction(theta)
    return schedule.tm(k) + theta * (schedule.tm(k + 1) - schedule.tm(k))
