"""Genus-2 test curves as two-sided arc systems and their pairings.

A test curve crosses the separating curve alpha ``2n`` times and meets each
one-holed torus in ``n`` arcs.  Only the relative homology classes of those
arcs enter any pairing, so the curve is stored as two arc multisets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .contfrac import CFSide, value_interval
from .curve_algebra import ArcClass, intersection_arc_curve
from .intervals import Interval, PrecisionError, as_fraction
from .projective import ProjectivePoint, normalize_intervals


@dataclass(frozen=True)
class TestCurve:
    arcs0: tuple[ArcClass, ...]
    arcs1: tuple[ArcClass, ...]
    id: str = "delta"

    __test__ = False  # not a pytest class

    def __post_init__(self):
        a0 = tuple(_arc(x) for x in self.arcs0)
        a1 = tuple(_arc(x) for x in self.arcs1)
        object.__setattr__(self, "arcs0", a0)
        object.__setattr__(self, "arcs1", a1)
        if not a0 or not a1:
            raise ValueError(f"{self.id}: both sides need at least one arc")
        if len(a0) != len(a1):
            raise ValueError(
                f"{self.id}: {len(a0)} arcs on side 0 but {len(a1)} on side 1")

    @property
    def n(self) -> int:
        return len(self.arcs0)

    @property
    def i_alpha(self) -> int:
        return 2 * self.n

    def arcs(self, side: int) -> tuple[ArcClass, ...]:
        return self.arcs0 if side == 0 else self.arcs1

    def scaled(self, factor: int) -> TestCurve:
        """Each arc repeated ``factor`` times (a curve with ``factor`` times the pairings)."""
        return TestCurve(self.arcs0 * factor, self.arcs1 * factor, f"{self.id}x{factor}")


def _arc(x) -> ArcClass:
    return x if isinstance(x, ArcClass) else ArcClass(*x)


@dataclass(frozen=True)
class MeasuredLamination:
    side: int
    weight: Fraction
    cf: CFSide

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if self.weight <= 0:
            raise ValueError("lamination weight must be positive")
        if self.side not in (0, 1):
            raise ValueError("side must be 0 or 1")

    def rescaled(self, factor) -> MeasuredLamination:
        return MeasuredLamination(self.side, self.weight * as_fraction(factor), self.cf)


def default_family() -> list[TestCurve]:
    """Arcs (1,0), (0,1), (1,1) on one side against (1,0) on the other."""
    family = []
    for h in (0, 1):
        for a, b in ((1, 0), (0, 1), (1, 1)):
            mine, other = (ArcClass(a, b),), (ArcClass(1, 0),)
            arcs0, arcs1 = (mine, other) if h == 0 else (other, mine)
            family.append(TestCurve(arcs0, arcs1, f"s{h}_a{a}{b}"))
    return family


def pair_delta_gamma(delta: TestCurve, k: int, schedule) -> int:
    """``i(delta, gamma_k)``; only arcs on the side carrying gamma_k count."""
    gamma = schedule.gamma(k)
    return sum(intersection_arc_curve(arc, gamma) for arc in delta.arcs(k % 2))


def _arc_lamination(arc: ArcClass, x: Interval) -> Interval:
    value = arc.a - x * arc.b
    if arc.b != 0 and value.straddles_zero():
        raise PrecisionError(f"sign of {arc.a} - x*{arc.b} undecided at {x}")
    return abs(value)


def pair_delta_lamination(delta: TestCurve, lam: MeasuredLamination,
                          precision_index: int) -> Interval:
    """``weight * sum |a - x_h b|`` over the side-h arcs, certified."""
    x = value_interval(lam.cf, precision_index)
    total = sum((_arc_lamination(arc, x) for arc in delta.arcs(lam.side)),
                Interval.point(0))
    return total * lam.weight


def lamination_pairing(delta: TestCurve, lam: MeasuredLamination,
                       tol, start: int = 2) -> Interval:
    """Escalate the precision index until the enclosure is narrower than ``tol``."""
    tol = as_fraction(tol)
    last = len(lam.cf)
    for index in range(min(start, last), last + 1):
        try:
            iv = pair_delta_lamination(delta, lam, index)
        except PrecisionError:
            continue
        if iv.width <= tol:
            return iv
    raise PrecisionError(
        f"{delta.id}: {last} coefficients cannot certify width {tol}")


def _arc_defect(delta: TestCurve, lam: MeasuredLamination, tol) -> Interval:
    """Largest ``|a - x b|`` over the arcs on the lamination's side."""
    tol = as_fraction(tol)
    last = len(lam.cf)
    for index in range(min(2, last), last + 1):
        try:
            x = value_interval(lam.cf, index)
            vals = [_arc_lamination(arc, x) for arc in delta.arcs(lam.side)]
        except PrecisionError:
            continue
        best = vals[0]
        for v in vals[1:]:
            best = best.max_with(v)
        if best.width <= tol:
            return best
    raise PrecisionError(f"{delta.id}: cannot certify arc defects")


def kappa_of(delta: TestCurve, laminations: Sequence[MeasuredLamination],
             tol=Fraction(1, 10**12)) -> Interval:
    """``max_h {2 n_h m_h, 2 / m_h}`` with ``m_h`` the maximal ``|a - x_h b|``."""
    kappa = None
    for lam in laminations:
        m = _arc_defect(delta, lam, tol)
        n = len(delta.arcs(lam.side))
        for cand in (m * (2 * n), Interval.point(2) / m):
            kappa = cand if kappa is None else kappa.max_with(cand)
    return kappa


def sandwich_check(delta: TestCurve, k: int, schedule, kappa: Interval) -> bool:
    """``e_{k-2}/kappa <= i(delta, gamma_k) <= kappa * I(k)``.

    Uses the lower end of the kappa enclosure, which makes both sides
    conservative.
    """
    if k < 2:
        raise ValueError("the sandwich needs k >= 2")
    value = pair_delta_gamma(delta, k, schedule)
    kap = kappa.lo
    return schedule.e(k - 2) <= kap * value and value <= kap * schedule.I(k)


def simplex_point(t, lam0: MeasuredLamination, lam1: MeasuredLamination,
                  family: Sequence[TestCurve], precision=Fraction(1, 10**12)) -> ProjectivePoint:
    """Chart point of ``(1 - t) lam0 + t lam1`` seen through the family."""
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if not family:
        raise ValueError("empty curve family")
    precision = as_fraction(precision)
    tol = precision / 16
    while True:
        values = []
        for delta in family:
            v = Interval.point(0)
            if t != 1:
                v = v + lamination_pairing(delta, lam0, tol) * (1 - t)
            if t != 0:
                v = v + lamination_pairing(delta, lam1, tol) * t
            values.append(v)
        point = normalize_intervals(values, [d.id for d in family])
        if point.error <= precision:
            return point
        tol /= 16
