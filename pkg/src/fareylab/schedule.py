"""Coefficient schedules for the two sides, nominal times, model functions.

Coefficients of the two sides are interleaved: ``e_{2i+h} = e_i^h`` and
``gamma_k`` is convergent ``k // 2`` of side ``k % 2``.  A schedule with
``kmax`` stores ``e_0 .. e_{kmax+1}`` so that every interval up to ``kmax``
has both of its active curves available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .contfrac import MIN_COEFFICIENT, CFSide, I_of, cap_digits, check_cap
from .curve_algebra import Slope
from .intervals import (Interval, as_fraction, exp_interval, log_interval,
                        round_to_grid)


class ConfigError(ValueError):
    """Invalid schedule or model configuration."""


_F1_KINDS = {"exp": ("c", "a"), "power": ("c", "n")}
_F2_KINDS = {"affine": ("c", "b"), "power": ("c", "n"), "exp": ("c", "a")}
_DEFAULTS = {"c": Fraction(1), "a": Fraction(1), "b": Fraction(1), "n": Fraction(1)}


@dataclass(frozen=True)
class ModelFunction:
    """A positive monotone model function.

    role ``f1`` (decreasing): ``exp``: c*exp(-a s); ``power``: c*(1+s)^-n.
    role ``f2`` (increasing): ``affine``: c*(1+b s); ``power``: c*(1+s)^n;
    ``exp``: c*exp(a s).
    """

    role: str
    kind: str
    params: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        kinds = {"f1": _F1_KINDS, "f2": _F2_KINDS}.get(self.role)
        if kinds is None:
            raise ConfigError(f"unknown model function role {self.role!r}")
        if self.kind not in kinds:
            raise ConfigError(f"{self.role}: unknown kind {self.kind!r}")
        given = dict(self.params)
        unknown = set(given) - set(kinds[self.kind])
        if unknown:
            raise ConfigError(f"{self.role}: unknown parameters {sorted(unknown)}")
        resolved = tuple((name, as_fraction(given.get(name, _DEFAULTS[name])))
                         for name in kinds[self.kind])
        object.__setattr__(self, "params", resolved)
        p = dict(resolved)
        if p["c"] <= 0:
            raise ConfigError(f"{self.role}: scale c must be positive")
        if "n" in p and p["n"].denominator != 1:
            raise ConfigError(f"{self.role}: exponent n must be an integer")
        rate = p.get("a", p.get("b", p.get("n")))
        if rate < 0:
            raise ConfigError(f"{self.role}: non-monotone configuration (rate {rate} < 0)")

    @classmethod
    def default_f1(cls) -> ModelFunction:
        return cls("f1", "exp")

    @classmethod
    def default_f2(cls) -> ModelFunction:
        return cls("f2", "affine")

    def param(self, name: str) -> Fraction:
        return dict(self.params)[name]

    @property
    def is_rational(self) -> bool:
        return self.kind != "exp"

    def interval(self, s) -> Interval:
        """Certified enclosure of the value at ``s >= 0``."""
        s = _time(s)
        p = dict(self.params)
        c = p["c"]
        if self.kind == "exp":
            sign = -1 if self.role == "f1" else 1
            return exp_interval(sign * p["a"] * s) * c
        if self.kind == "affine":
            return Interval.point(c * (1 + p["b"] * s))
        n = int(p["n"])
        return Interval.point(c * (1 + s) ** (-n if self.role == "f1" else n))

    def value(self, s) -> Fraction:
        """Exact value, or the value rounded to the 2^-64 grid when transcendental."""
        iv = self.interval(s)
        if iv.width == 0:
            return iv.lo
        v = round_to_grid(iv.mid)
        if v <= 0:
            raise ConfigError(f"{self.role}({s}) underflows the 2^-64 grid")
        return v

    def __call__(self, s) -> Fraction:
        return self.value(s)

    def log_interval(self, s) -> Interval:
        """Certified enclosure of ``log f(s)``."""
        s = _time(s)
        p = dict(self.params)
        log_c = log_interval(p["c"])
        if self.kind == "exp":
            sign = -1 if self.role == "f1" else 1
            return log_c + sign * p["a"] * s
        if self.kind == "affine":
            return log_c + log_interval(1 + p["b"] * s)
        n = int(p["n"])
        return log_c + log_interval(1 + s) * (-n if self.role == "f1" else n)

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "params": {k: f"{v.numerator}/{v.denominator}" for k, v in self.params}}

    @classmethod
    def from_json(cls, role: str, data: dict) -> ModelFunction:
        params = tuple((k, Fraction(v)) for k, v in sorted(data.get("params", {}).items()))
        return cls(role, data["kind"], params)


def _time(s) -> Fraction:
    s = as_fraction(s)
    if s < 0:
        raise ValueError("model functions are defined for s >= 0")
    return s


@dataclass(frozen=True)
class Eta:
    """Target ratio sequence: ``harmonic`` c/(k+1) or ``power`` c/(k+1)^n."""

    kind: str = "harmonic"
    c: Fraction = Fraction(1)
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.kind not in ("harmonic", "power"):
            raise ConfigError(f"unknown eta kind {self.kind!r}")
        if self.c <= 0:
            raise ConfigError("eta must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError("eta must decrease to 0 (exponent n >= 1)")
        if self.kind == "harmonic" and self.n != 1:
            raise ConfigError("harmonic eta has exponent 1")

    def __call__(self, k: int) -> Fraction:
        return self.c / Fraction(k + 1) ** self.n

    def to_json(self) -> dict:
        out = {"kind": self.kind, "c": f"{self.c.numerator}/{self.c.denominator}"}
        if self.kind == "power":
            out["n"] = self.n
        return out

    @classmethod
    def from_json(cls, data: dict) -> Eta:
        return cls(data.get("kind", "harmonic"), Fraction(data.get("c", "1")),
                   int(data.get("n", 1)))


@dataclass(frozen=True)
class AuditFinding:
    k: int
    invariant: str
    detail: str

    def __str__(self):
        return f"{self.invariant} violated at k={self.k}: {self.detail}"


@dataclass(frozen=True)
class GrowthSchedule:
    D: Fraction
    kmax: int
    coeffs: tuple[int, ...]
    floors: tuple[int, ...] = ()
    f1: ModelFunction = field(default_factory=ModelFunction.default_f1)
    f2: ModelFunction = field(default_factory=ModelFunction.default_f2)
    eta: Eta = field(default_factory=Eta)
    alpha_bound: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "D", as_fraction(self.D))
        object.__setattr__(self, "alpha_bound", as_fraction(self.alpha_bound))
        object.__setattr__(self, "coeffs", tuple(int(e) for e in self.coeffs))
        object.__setattr__(self, "floors", tuple(int(f) for f in self.floors))
        if self.D <= 0:
            raise ConfigError("D must be positive")
        if self.kmax < 0 or len(self.coeffs) != self.kmax + 2:
            raise ConfigError(
                f"kmax = {self.kmax} needs {self.kmax + 2} coefficients, got {len(self.coeffs)}")
        if self.f1.role != "f1" or self.f2.role != "f2":
            raise ConfigError("model functions passed in the wrong roles")
        if self.f1.param("c") > self.alpha_bound:
            raise ConfigError(
                f"f1(0) = {self.f1.param('c')} exceeds the alpha length bound {self.alpha_bound}")

    @classmethod
    def from_sides(cls, even: Sequence[int], odd: Sequence[int], D=1, **kw) -> GrowthSchedule:
        """Schedule with prescribed side coefficients (no growth rule applied)."""
        if not (len(even) == len(odd) or len(even) == len(odd) + 1):
            raise ConfigError("side lengths cannot be interleaved")
        coeffs = [None] * (len(even) + len(odd))
        coeffs[0::2], coeffs[1::2] = list(even), list(odd)
        if len(coeffs) < 2:
            raise ConfigError("need at least one coefficient per side")
        return cls(as_fraction(D), len(coeffs) - 2, tuple(coeffs), **kw)

    # -- interleaved view -------------------------------------------------

    @cached_property
    def sides(self) -> tuple[CFSide, CFSide]:
        return (CFSide(self.coeffs[0::2], 0), CFSide(self.coeffs[1::2], 1))

    def e(self, k: int) -> int:
        if not 0 <= k < len(self.coeffs):
            raise IndexError(f"e_{k} not in schedule (kmax = {self.kmax})")
        return self.coeffs[k]

    def gamma(self, k: int) -> Slope:
        return self.sides[k % 2].curve(k // 2)

    def I(self, k: int) -> int:  # noqa: E743, N802
        """``I(k)``: product of ``1 + e`` over the earlier coefficients of side ``k % 2``."""
        return I_of(self.sides[k % 2], k // 2)

    def floor(self, k: int) -> int:
        return floor_at(self.floors, k)

    # -- times ------------------------------------------------------------

    def t(self, k: int) -> Fraction:
        return nominal_time(k, self.D)

    def tm(self, k: int) -> Fraction:
        return nominal_midtime(k, self.D)

    @property
    def times(self) -> list[Fraction]:
        return [self.t(k) for k in range(self.kmax + 4)]

    @property
    def midtimes(self) -> list[Fraction]:
        return [self.tm(k) for k in range(self.kmax + 2)]

    def F1_interval(self, k: int) -> Interval:  # noqa: N802
        """Minimum of f1 on ``[t_k, t_{k+2}]``, attained at the right end."""
        return self.f1.interval(self.t(k + 2))

    def F2_interval(self, k: int) -> Interval:  # noqa: N802
        return self.f2.interval(self.t(k + 2))

    def alpha_term(self, k: int) -> Interval:
        """``F_{2,k} - 2 log F_{1,k}``, certified."""
        return alpha_term(self.f1, self.f2, self.t(k + 2))

    # -- audit ------------------------------------------------------------

    def growth_audit(self, upto: Optional[int] = None) -> list[AuditFinding]:
        """Every violated invariant for ``k <= upto`` (default: all coefficients)."""
        last = len(self.coeffs) - 1 if upto is None else min(upto, len(self.coeffs) - 1)
        found = []
        for k in range(last + 1):
            e = self.coeffs[k]
            bound = max(MIN_COEFFICIENT, self.floor(k))
            if e < bound:
                found.append(AuditFinding(k, "coefficient_floor", f"e_{k} = {e} < {bound}"))
        if found:
            return found  # the continued fractions are invalid; stop here
        for k in range(last + 1):
            e, eta = self.coeffs[k], self.eta(k)
            for name, num in (("growth_I_k", self.I(k)), ("growth_I_k_plus_1", self.I(k + 1))):
                if Fraction(num, e) > eta:
                    found.append(AuditFinding(k, name, f"{num}/{e} > {eta}"))
            if not (self.alpha_term(k) / e).certainly_le(eta):
                found.append(AuditFinding(k, "growth_alpha_envelope",
                                          f"(F2 - 2 log F1)/e_{k} not certified <= {eta}"))
        return found


def floor_at(floors: Sequence[int], k: int) -> int:
    return floors[k] if k < len(floors) else MIN_COEFFICIENT


def nominal_time(k: int, D=1) -> Fraction:
    """``t_{2i} = D/2 + iD`` and ``t_{2i+1} = (i+1)D``, i.e. ``(k+1)D/2``."""
    if k < 0:
        raise IndexError("times start at k = 0")
    return Fraction(k + 1) * as_fraction(D) / 2


def nominal_midtime(k: int, D=1) -> Fraction:
    return (nominal_time(k, D) + nominal_time(k + 1, D)) / 2


def alpha_term(f1: ModelFunction, f2: ModelFunction, s) -> Interval:
    return f2.interval(s) - f1.log_interval(s) * 2


def _ceil_div(num: Fraction, den: Fraction) -> int:
    return math.ceil(num / den)


def generate(kmax: int, D=1, floors: Sequence[int] = (),
             f1: Optional[ModelFunction] = None, f2: Optional[ModelFunction] = None,
             eta: Optional[Eta] = None, alpha_bound=1,
             cap: Optional[int] = None) -> GrowthSchedule:
    """Greedy schedule: each ``e_k`` is the least value meeting every growth bound.

    ``e_k = max(4, K_k, ceil(max(I(k), I(k+1), F_{2,k} - 2 log F_{1,k}, 1) / eta_k))``
    where the alpha term uses the upper end of its certified enclosure.
    """
    if kmax < 0:
        raise ConfigError("kmax must be >= 0")
    D = as_fraction(D)
    if D <= 0:
        raise ConfigError("D must be positive")
    for j, K in enumerate(floors):
        if K < MIN_COEFFICIENT:
            raise ConfigError(f"floor K_{j} = {K} < {MIN_COEFFICIENT}")
    f1 = f1 or ModelFunction.default_f1()
    f2 = f2 or ModelFunction.default_f2()
    eta = eta or Eta()
    cap = cap_digits() if cap is None else cap
    coeffs: list[int] = []
    for k in range(kmax + 2):
        I_k = math.prod(1 + e for e in coeffs[k % 2::2])
        I_k1 = math.prod(1 + e for e in coeffs[(k + 1) % 2::2])
        F = alpha_term(f1, f2, nominal_time(k + 2, D)).hi
        target = max(Fraction(I_k), Fraction(I_k1), F, Fraction(1))
        e = max(MIN_COEFFICIENT, floor_at(floors, k), _ceil_div(target, eta(k)))
        check_cap(e, k, cap)
        coeffs.append(e)
    return GrowthSchedule(D, kmax, tuple(coeffs), tuple(floors), f1, f2, eta,
                          as_fraction(alpha_bound))
