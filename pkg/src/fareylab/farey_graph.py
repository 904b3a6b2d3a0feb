"""Farey graph combinatorics on reduced slopes.

Vertices are reduced pairs ``p/q`` plus ``1/0``; ``p/q`` and ``r/s`` are
joined iff ``|ps - rq| = 1``.  Every search is restricted to a finite vertex
set: denominators at most ``qmax`` and finite values inside a closed rational
window (``1/0`` is always admitted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .curve_algebra import INFINITY, Slope, farey_adjacent
from .intervals import Interval, as_fraction

Pair = tuple[int, int]


def slope_key(s: Slope) -> tuple:
    """Canonical order: 1/0 first, then by value."""
    if s.q == 0:
        return (0, Fraction(0))
    return (1, Fraction(s.p, s.q))


def _as_window(window) -> Optional[Interval]:
    if window is None or isinstance(window, Interval):
        return window
    lo, hi = window
    return Interval(as_fraction(lo), as_fraction(hi))


def _neighbor_pairs(p: int, q: int, qmax: int, lo, hi) -> set[Pair]:
    """Reduced pairs adjacent to ``p/q`` inside the restriction.

    ``lo``/``hi`` are the window bounds (``None`` for unbounded).
    """
    out: set[Pair] = set()
    if q == 0:
        if lo is None or hi is None:
            raise ValueError("neighbors of 1/0 need a finite numerator window")
        for n in range(math.ceil(lo), math.floor(hi) + 1):
            out.add((n, 1))
        return out
    if q == 1:
        out.add((1, 0))
    # p*s - q*r = sign  <=>  s = sign * p^{-1} (mod q)
    inverse = pow(p, -1, q) if q > 1 else 0
    for sign in (1, -1):
        s = (sign * inverse) % q
        if s == 0:
            s = q
        while s <= qmax:
            r, rem = divmod(p * s - sign, q)
            if rem == 0 and (lo is None or lo * s <= r) and (hi is None or r <= hi * s):
                out.add((r, s))
            s += q
    return out


def neighbors_bounded(v: Slope, qmax: int, window=None) -> list[Slope]:
    """Farey neighbours of ``v`` with denominator <= ``qmax``.

    ``window`` restricts finite values to a closed interval and is required
    when ``v`` is 1/0 (which has infinitely many neighbours).
    """
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    w = _as_window(window)
    lo, hi = (None, None) if w is None else (w.lo, w.hi)
    found = _neighbor_pairs(v.p, v.q, qmax, lo, hi)
    return sorted((Slope(*pair) for pair in found), key=slope_key)


def default_restriction(endpoints: Sequence[Slope]) -> tuple[int, Interval]:
    """Max endpoint denominator and the finite-value hull widened by 1."""
    finite = [s.value for s in endpoints if s.q != 0]
    qmax = max([s.q for s in endpoints] + [1])
    if not finite:
        return qmax, Interval(-1, 1)
    return qmax, Interval(min(finite) - 1, max(finite) + 1)


def _admitted(s: Slope, qmax: int, w: Interval) -> bool:
    return s.q == 0 or (s.q <= qmax and w.contains(s.value))


def bfs_distance(u: Slope, v: Slope, qmax: Optional[int] = None,
                 window=None) -> Optional[int]:
    """Restricted graph distance, or ``None`` when ``v`` is unreachable.

    Bidirectional breadth-first search; the smaller frontier is expanded and
    the layer in which the two searches meet is finished before returning.
    """
    if qmax is None or window is None:
        dq, dw = default_restriction([u, v])
        qmax = dq if qmax is None else qmax
        window = dw if window is None else window
    w = _as_window(window)
    for end in (u, v):
        if not _admitted(end, qmax, w):
            raise ValueError(f"{end} lies outside the restriction")
    if u == v:
        return 0
    start, goal = u.vector(), v.vector()
    dist_a, dist_b = {start: 0}, {goal: 0}
    front_a, front_b = [start], [goal]
    depth_a = depth_b = 0
    while front_a and front_b:
        if len(front_a) > len(front_b):
            dist_a, dist_b = dist_b, dist_a
            front_a, front_b = front_b, front_a
            depth_a, depth_b = depth_b, depth_a
        depth_a += 1
        best = None
        nxt = []
        for p, q in front_a:
            for pair in _neighbor_pairs(p, q, qmax, w.lo, w.hi):
                if pair in dist_b:
                    total = depth_a + dist_b[pair]
                    best = total if best is None else min(best, total)
                elif pair not in dist_a:
                    dist_a[pair] = depth_a
                    nxt.append(pair)
        if best is not None:
            return best
        front_a = nxt
    return None


def geodesic_distances(seq: Sequence[Slope], qmax=None, window=None) -> list[Optional[int]]:
    """``bfs_distance(seq[0], seq[i])`` for every ``i`` under one restriction."""
    if qmax is None or window is None:
        dq, dw = default_restriction(seq)
        qmax = dq if qmax is None else qmax
        window = dw if window is None else window
    return [bfs_distance(seq[0], s, qmax, window) for s in seq]


def is_geodesic_sequence(seq: Sequence[Slope], qmax=None, window=None) -> bool:
    for a, b in zip(seq, seq[1:]):
        if not farey_adjacent(a, b):
            raise ValueError(f"consecutive entries {a}, {b} are not adjacent")
    return all(d == i for i, d in enumerate(geodesic_distances(seq, qmax, window)))


@dataclass(frozen=True)
class GeodesicCertificate:
    """Path length (upper bound) against the restricted BFS distance."""

    index: int
    upper: int
    restricted: Optional[int]

    @property
    def ok(self) -> bool:
        return self.restricted == self.upper


def geodesic_certificates(seq: Sequence[Slope], qmax=None, window=None) -> list[GeodesicCertificate]:
    dists = geodesic_distances(seq, qmax, window)
    return [GeodesicCertificate(i, i, d) for i, d in enumerate(dists)]


def _det(a: Slope, b: Slope) -> int:
    return a.p * b.q - b.p * a.q


def cyclic_orientation(a: Slope, b: Slope, c: Slope) -> int:
    """+1 if a, b, c occur in increasing cyclic order on R u {oo}, -1 if
    decreasing, 0 if two coincide."""
    sign = _det(a, b) * _det(b, c) * _det(c, a)
    return (sign > 0) - (sign < 0)


def in_open_arc(x: Slope, a: Slope, b: Slope, avoid: Slope) -> bool:
    """Is ``x`` in the open arc between ``a`` and ``b`` that misses ``avoid``?"""
    if a == b or avoid in (a, b):
        raise ValueError("degenerate arc")
    if x in (a, b):
        return False
    return cyclic_orientation(a, x, b) == -cyclic_orientation(a, avoid, b)


def pivot_separation(seq: Sequence[Slope], i: int) -> bool:
    """``seq[i+1]`` lies in the arc cut off by ``seq[i-1], seq[i]`` away from ``seq[0]``.

    ``seq[0]`` is the base vertex; ``2 <= i <= len(seq) - 2``.
    """
    if not 2 <= i <= len(seq) - 2:
        raise IndexError(f"pivot index {i} out of range for length {len(seq)}")
    a, b, nxt = seq[i - 1], seq[i], seq[i + 1]
    if len({seq[0], a, b, nxt}) < 4:
        raise ValueError("degenerate pivot: repeated endpoints")
    return in_open_arc(nxt, a, b, seq[0])


__all__ = [
    "INFINITY", "GeodesicCertificate", "bfs_distance", "cyclic_orientation",
    "default_restriction", "geodesic_certificates", "geodesic_distances",
    "in_open_arc", "is_geodesic_sequence", "neighbors_bounded",
    "pivot_separation", "slope_key",
]
