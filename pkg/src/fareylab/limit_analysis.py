"""Convergence diagnostics of projectivized length vectors.

The target set is the segment between the two limit laminations, viewed in
the sum-one chart of the test-curve family.  All distances are certified
intervals; sampled points themselves are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .intervals import Interval, as_fraction, log_interval
from .pairing import (MeasuredLamination, TestCurve, lamination_pairing, pair_delta_gamma,
                      simplex_point)
from .projective import (ProjectivePoint, certified_distance, normalize_intervals,
                         proj_distance, projectivize)
from .ray_model import ModelParams, length_terms, sweep_time, xy_of
from .schedule import GrowthSchedule

DEFAULT_PRECISION = Fraction(1, 10**9)
_GRID = 64
_PROBE_BITS = 64


@dataclass(frozen=True)
class Segment:
    """Chart endpoints and total masses of the two laminations."""

    start: ProjectivePoint
    end: ProjectivePoint
    mass0: Fraction
    mass1: Fraction

    @property
    def error(self) -> Fraction:
        return max(self.start.error, self.end.error)

    def at(self, u: Fraction) -> tuple[Fraction, ...]:
        return tuple((1 - u) * a + u * b for a, b in zip(self.start.coords, self.end.coords))

    def lamination_parameter(self, u: Fraction) -> Fraction:
        """Weight ``t`` of the second lamination giving chart parameter ``u``."""
        num = u * self.mass0
        return num / (num + (1 - u) * self.mass1)


@lru_cache(maxsize=64)
def _segment(lam0: MeasuredLamination, lam1: MeasuredLamination,
             family: tuple[TestCurve, ...], precision: Fraction) -> Segment:
    ends, masses = [], []
    for lam in (lam0, lam1):
        tol = precision / 16
        while True:
            values = [lamination_pairing(d, lam, tol) for d in family]
            point = normalize_intervals(values, [d.id for d in family])
            if point.error <= precision:
                break
            tol /= 16
        ends.append(point)
        masses.append(sum(v.mid for v in values))
    return Segment(ends[0], ends[1], masses[0], masses[1])


def segment_of(lam0, lam1, family: Sequence[TestCurve], precision=DEFAULT_PRECISION) -> Segment:
    return _segment(lam0, lam1, tuple(family), as_fraction(precision))


@dataclass(frozen=True)
class SegmentFit:
    distance: Interval
    u: Fraction
    t: Fraction


def _sup(v: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    return max(abs(a - b) for a, b in zip(v, w))


def _probe(a: Fraction, b: Fraction, frac: Fraction) -> Fraction:
    x = a + (b - a) * frac
    scale = 1 << _PROBE_BITS
    return Fraction(round(x * scale), scale)


def segment_fit(v: ProjectivePoint, lam0, lam1, family: Sequence[TestCurve],
                precision=DEFAULT_PRECISION) -> SegmentFit:
    """Certified ``min_t proj_distance(v, simplex_point(t))`` and its minimizer.

    The segment is straight in the chart, so ``u -> sup|v - P(u)|`` is convex
    and piecewise linear.  A coarse grid brackets the minimum, golden-section
    search narrows the bracket, and the Lipschitz constant of the chart path
    turns the bracket width into a rigorous lower bound.
    """
    precision = as_fraction(precision)
    if len(v) != len(family):
        raise ValueError("point and family have different sizes")
    seg = segment_of(lam0, lam1, family, precision / 4)
    lip = _sup(seg.start.coords, seg.end.coords)
    f = lambda u: _sup(v.coords, seg.at(u))  # noqa: E731
    grid = [Fraction(j, _GRID) for j in range(_GRID + 1)]
    values = [f(u) for u in grid]
    j = min(range(len(grid)), key=lambda i: (values[i], i))
    a, b = grid[max(j - 1, 0)], grid[min(j + 1, _GRID)]
    best_u, best = grid[j], values[j]
    ratio = Fraction(381966011250105, 10**15)
    slack = seg.error + v.error
    while lip * (b - a) + 2 * slack > precision and b - a > Fraction(1, 1 << (_PROBE_BITS - 4)):
        c, d = _probe(a, b, ratio), _probe(a, b, 1 - ratio)
        fc, fd = f(c), f(d)
        for u, fu in ((c, fc), (d, fd)):
            if fu < best:
                best_u, best = u, fu
        if fc <= fd:
            b = d
        else:
            a = c
    lower = max(Fraction(0), best - lip * (b - a) - slack)
    upper = best + slack
    return SegmentFit(Interval(lower, upper), best_u, seg.lamination_parameter(best_u))


def distance_to_segment(v: ProjectivePoint, lam0, lam1, family: Sequence[TestCurve],
                        precision=DEFAULT_PRECISION) -> Interval:
    return segment_fit(v, lam0, lam1, family, precision).distance


def laminations_of(schedule: GrowthSchedule) -> tuple[MeasuredLamination, MeasuredLamination]:
    """Unit-weight laminations carried by the two sides of the schedule."""
    return (MeasuredLamination(0, Fraction(1), schedule.sides[0]),
            MeasuredLamination(1, Fraction(1), schedule.sides[1]))


def alpha_budget(delta: TestCurve, k: int, schedule: GrowthSchedule,
                 params: ModelParams) -> Interval:
    """Upper envelope of the alpha part of a length anywhere on ``[t_k, t_{k+2}]``.

    Uses ``l_alpha <= f1(0)``, ``f2 <= F_{2,k}`` and the collar bound
    ``w(l) <= 2 log(1 + 4/l)`` with ``l >= F_{1,k}``.
    """
    F1 = schedule.F1_interval(k)
    F2 = schedule.F2_interval(k)
    f1_0 = schedule.f1.value(0)
    collar = log_interval_of(1 + Interval.point(4) / F1) * 2
    return (F2 * f1_0 + collar + params.c_O) * delta.i_alpha


def log_interval_of(x: Interval) -> Interval:
    return Interval(log_interval(x.lo).lo, log_interval(x.hi).hi)


@dataclass(frozen=True)
class CurveDiagnostics:
    length: Fraction
    lemma_ratio: Fraction  # x i(delta, gamma_k) / (both active-curve terms)
    active_ratio: Fraction  # (x i_k + y i_{k+1}) / (both active-curve terms)
    alpha_share: Fraction
    alpha_within_budget: bool


@dataclass(frozen=True)
class SampleRow:
    k: int
    s: Fraction
    point: ProjectivePoint
    x: Fraction
    y: Fraction
    curves: dict = field(hash=False)
    distance: Interval = None
    fit_t: Optional[Fraction] = None

    @property
    def max_alpha_share(self) -> Fraction:
        return max(c.alpha_share for c in self.curves.values())


def sample_row(k: int, s, schedule: GrowthSchedule, family: Sequence[TestCurve],
               params: ModelParams) -> SampleRow:
    s = as_fraction(s)
    x, y = xy_of(s, schedule, params)
    curves, lengths = {}, []
    for delta in family:
        terms = length_terms(delta, s, schedule, params)
        active = terms.gamma_k + terms.gamma_k1
        i_k = pair_delta_gamma(delta, k, schedule)
        i_k1 = pair_delta_gamma(delta, k + 1, schedule)
        alpha = terms.alpha + params.c_O * delta.i_alpha
        budget = alpha_budget(delta, k, schedule, params)
        curves[delta.id] = CurveDiagnostics(
            length=terms.total,
            lemma_ratio=x * i_k / active,
            active_ratio=(x * i_k + y * i_k1) / active,
            alpha_share=alpha / terms.total,
            alpha_within_budget=alpha <= budget.lo,
        )
        lengths.append(terms.total)
    point = projectivize(lengths, [d.id for d in family])
    return SampleRow(k, s, point, x, y, curves)


@dataclass(frozen=True)
class EndpointReport:
    parity: int
    target: ProjectivePoint
    rows: tuple[SampleRow, ...]

    def strictly_decreasing_from(self, kmin: int) -> bool:
        rows = [r for r in self.rows if r.k >= kmin]
        return all(b.distance.hi < a.distance.lo for a, b in zip(rows, rows[1:]))

    def final_distance(self) -> Interval:
        return self.rows[-1].distance


def finest_precision(schedule: GrowthSchedule) -> Fraction:
    """A chart precision the stored coefficients can still certify."""
    q = min(side.convergent(len(side))[1] for side in schedule.sides)
    return Fraction(1024, q * q)


def endpoint_convergence_report(schedule: GrowthSchedule, family: Sequence[TestCurve],
                                params: ModelParams, parity: int,
                                precision=None, kmin: int = 2) -> EndpointReport:
    """Samples at ``t'_k`` for ``k`` of the given parity against ``simplex_point(parity)``.

    Distances shrink super-exponentially, so by default the target is
    certified as finely as the schedule allows.
    """
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    if precision is None:
        precision = finest_precision(schedule)
    lam0, lam1 = laminations_of(schedule)
    target = simplex_point(parity, lam0, lam1, family, as_fraction(precision))
    rows = []
    for k in range(max(kmin, 2), schedule.kmax + 1):
        if k % 2 != parity:
            continue
        row = sample_row(k, schedule.tm(k), schedule, family, params)
        rows.append(replace(row, distance=certified_distance(row.point, target)))
    return EndpointReport(parity, target, tuple(rows))


@dataclass(frozen=True)
class SweepReport:
    thetas: tuple[Fraction, ...]
    rows: dict = field(hash=False)  # theta -> tuple of SampleRow over even k

    def limit_rows(self) -> dict:
        return {th: rows[-1] for th, rows in self.rows.items()}

    def min_pairwise_distance(self) -> Fraction:
        pts = [r.point for r in self.limit_rows().values()]
        if len(pts) < 2:
            return Fraction(0)
        return min(proj_distance(a, b) for i, a in enumerate(pts) for b in pts[i + 1:])

    def max_segment_distance(self) -> Fraction:
        return max(r.distance.hi for r in self.limit_rows().values())


def sweep_report(schedule: GrowthSchedule, family: Sequence[TestCurve], params: ModelParams,
                 thetas: Sequence, precision=DEFAULT_PRECISION, kmin: int = 2) -> SweepReport:
    """Samples at ``t'_k + theta (t'_{k+1} - t'_k)`` along even ``k``."""
    lam0, lam1 = laminations_of(schedule)
    thetas = tuple(as_fraction(th) for th in thetas)
    out = {}
    for th in thetas:
        if not 0 <= th < 1:
            raise ValueError(f"theta = {th} outside [0, 1)")
        rows = []
        for k in range(max(kmin, 2), schedule.kmax + 1):
            if k % 2:
                continue
            row = sample_row(k, sweep_time(k, th, schedule), schedule, family, params)
            fit = segment_fit(row.point, lam0, lam1, family, precision)
            rows.append(replace(row, distance=fit.distance, fit_t=fit.t))
        out[th] = tuple(rows)
    return SweepReport(thetas, out)


def decay_ratios(delta: TestCurve, schedule: GrowthSchedule, kmin: int = 4) -> list[tuple[int, Fraction, Fraction]]:
    """``(k, i(delta, gamma_k)/e_k, i(delta, gamma_{k+1})/e_k)`` for ``kmin <= k <= kmax``."""
    return [(k, Fraction(pair_delta_gamma(delta, k, schedule), schedule.e(k)),
             Fraction(pair_delta_gamma(delta, k + 1, schedule), schedule.e(k)))
            for k in range(kmin, schedule.kmax + 1)]


__all__ = [
    "ProjectivePoint", "projectivize", "proj_distance", "distance_to_segment",
    "segment_fit", "endpoint_convergence_report", "sweep_report", "laminations_of",
    "alpha_budget", "decay_ratios", "finest_precision",
]
