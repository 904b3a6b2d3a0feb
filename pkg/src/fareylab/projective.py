"""Points of the sum-one chart on projectivized intersection vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .intervals import Interval, as_fraction


@dataclass(frozen=True)
class ProjectivePoint:
    """Nonnegative rational coordinates summing to exactly 1.

    ``error`` bounds the sup-norm distance to the true point when the
    coordinates were rounded from certified intervals (0 means exact).
    """

    coords: tuple[Fraction, ...]
    labels: Optional[tuple[str, ...]] = None
    error: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "error", as_fraction(self.error))
        if not coords or any(c < 0 for c in coords):
            raise ValueError("coordinates must be nonnegative and nonempty")
        if sum(coords) != 1:
            raise ValueError("coordinates must sum to 1")
        if self.labels is not None and len(self.labels) != len(coords):
            raise ValueError("label count does not match coordinate count")

    def __len__(self):
        return len(self.coords)


def projectivize(lengths: Sequence, labels=None) -> ProjectivePoint:
    values = [as_fraction(x) for x in lengths]
    if any(x < 0 for x in values):
        raise ValueError("lengths must be nonnegative")
    total = sum(values)
    if total == 0:
        raise ValueError("cannot projectivize the zero vector")
    return ProjectivePoint(tuple(x / total for x in values),
                           None if labels is None else tuple(labels))


def proj_distance(u: ProjectivePoint, v: ProjectivePoint) -> Fraction:
    """Sup-norm distance between the chart coordinates."""
    if len(u) != len(v):
        raise ValueError("points live on different index sets")
    if u.labels is not None and v.labels is not None and u.labels != v.labels:
        raise ValueError("points are indexed by different curve families")
    return max(abs(a - b) for a, b in zip(u.coords, v.coords))


def certified_distance(u: ProjectivePoint, v: ProjectivePoint) -> Interval:
    d = proj_distance(u, v)
    slack = u.error + v.error
    return Interval(max(Fraction(0), d - slack), d + slack)


def normalize_intervals(values: Sequence[Interval], labels=None) -> ProjectivePoint:
    """Round a vector of certified positive intervals to a chart point."""
    mids = [iv.mid for iv in values]
    total = sum(mids)
    if total <= 0:
        raise ValueError("cannot projectivize the zero vector")
    coords = tuple(m / total for m in mids)
    total_iv = sum(values[1:], values[0])
    error = Fraction(0)
    for iv, c in zip(values, coords):
        q = iv / total_iv
        error = max(error, abs(q.hi - c), abs(c - q.lo))
    return ProjectivePoint(coords, None if labels is None else tuple(labels), error)
