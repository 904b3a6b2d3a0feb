"""Deterministic SVG drawings of the Farey tessellation and of limit points.

Farey edges are semicircles over the real axis of the upper half-plane;
edges to 1/0 are vertical rays.  Floats are printed with 6 decimals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .curve_algebra import Slope
from .farey_graph import slope_key

WIDTH = 800
PAD = 20


def _f(x) -> str:
    text = f"{float(x):.6f}"
    return "0.000000" if text == "-0.000000" else text


def stern_brocot_edges(x0: int, x1: int, depth: int) -> list[tuple[Slope, Slope]]:
    """Farey edges reached by ``depth`` rounds of mediant insertion on each ``[n, n+1]``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    edges = []

    def split(a: Slope, b: Slope, d: int) -> None:
        edges.append((a, b))
        if d == 0:
            return
        m = Slope(a.p + b.p, a.q + b.q)
        split(a, m, d - 1)
        split(m, b, d - 1)

    for n in range(x0, x1):
        split(Slope(n, 1), Slope(n + 1, 1), depth)
    return sorted(edges, key=lambda e: (slope_key(e[0]), slope_key(e[1])))


class _Canvas:
    def __init__(self, x0: Fraction, x1: Fraction):
        self.x0, self.x1 = x0, x1
        self.scale = Fraction(WIDTH - 2 * PAD, 1) / (x1 - x0)
        self.height = (WIDTH - 2 * PAD) // 2 + 2 * PAD
        self.base = self.height - PAD

    def px(self, x) -> Fraction:
        return PAD + (Fraction(x) - self.x0) * self.scale

    def arc(self, a: Slope, b: Slope, cls: str) -> str:
        attrs = f'class="{cls}" data-from="{a}" data-to="{b}"'
        if a.q == 0 or b.q == 0:
            finite = b if a.q == 0 else a
            x = _f(self.px(finite.value))
            return f'<path {attrs} d="M {x} {_f(self.base)} L {x} {_f(PAD)}"/>'
        lo, hi = sorted((a.value, b.value))
        r = (hi - lo) * self.scale / 2
        return (f'<path {attrs} d="M {_f(self.px(lo))} {_f(self.base)} '
                f'A {_f(r)} {_f(r)} 0 0 1 {_f(self.px(hi))} {_f(self.base)}"/>')


def render_tessellation(x0: int, x1: int, depth: int,
                        path: Optional[Sequence[Slope]] = None,
                        horoballs: bool = False) -> str:
    """Tessellation over ``[x0, x1]`` with an optional thick vertex path."""
    if not (isinstance(x0, int) and isinstance(x1, int)) or x0 >= x1:
        raise ValueError(f"invalid viewport [{x0}, {x1}]")
    cv = _Canvas(Fraction(x0), Fraction(x1))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{cv.height}" '
           f'viewBox="0 0 {WIDTH} {cv.height}">',
           f'<line class="axis" x1="{_f(PAD)}" y1="{_f(cv.base)}" x2="{_f(WIDTH - PAD)}" '
           f'y2="{_f(cv.base)}" stroke="black" stroke-width="1"/>',
           '<g class="tessellation" fill="none" stroke="#888" stroke-width="0.5">']
    out += [cv.arc(a, b, "farey") for a, b in stern_brocot_edges(x0, x1, depth)]
    out.append("</g>")
    if path:
        out.append('<g class="overlay" fill="none" stroke="#c00" stroke-width="3">')
        out += [cv.arc(a, b, "geodesic") for a, b in zip(path, path[1:])]
        out.append("</g>")
        out.append('<g class="vertices" fill="#c00">')
        for v in path:
            if v.q:
                out.append(f'<circle class="vertex" data-slope="{v}" cx="{_f(cv.px(v.value))}" '
                           f'cy="{_f(cv.base)}" r="3"/>')
        out.append("</g>")
        if horoballs:
            out.append('<g class="horoballs" fill="#fc8" fill-opacity="0.4" stroke="#c80">')
            for v in path:
                if v.q:
                    r = cv.scale / (2 * v.q * v.q)
                    out.append(f'<circle class="horoball" data-slope="{v}" cx="{_f(cv.px(v.value))}" '
                               f'cy="{_f(cv.base - r)}" r="{_f(r)}"/>')
            out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_scatter(points: Sequence[tuple[str, Sequence[Fraction]]],
                   corner_labels: Sequence[str] = ("1", "2", "3")) -> str:
    """Ternary scatter: each point is three nonnegative weights (renormalized)."""
    size = WIDTH - 2 * PAD
    h = Fraction(size) * Fraction(866025, 1000000)
    corners = [(Fraction(PAD), PAD + h), (Fraction(PAD + size), PAD + h),
               (Fraction(PAD + size // 2), Fraction(PAD))]
    height = int(h) + 2 * PAD
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
           f'viewBox="0 0 {WIDTH} {height}">',
           '<polygon class="simplex" fill="none" stroke="black" points="'
           + " ".join(f"{_f(x)},{_f(y)}" for x, y in corners) + '"/>']
    for (x, y), name in zip(corners, corner_labels):
        out.append(f'<text x="{_f(x)}" y="{_f(y)}" font-size="12">{name}</text>')
    for label, w in points:
        w = [Fraction(c) for c in w]
        total = sum(w)
        if len(w) != 3 or total <= 0 or any(c < 0 for c in w):
            raise ValueError(f"point {label!r} is not a nonzero nonnegative triple")
        px = sum(c * x for c, (x, _) in zip(w, corners)) / total
        py = sum(c * y for c, (_, y) in zip(w, corners)) / total
        out.append(f'<circle class="limit" data-label="{label}" cx="{_f(px)}" cy="{_f(py)}" '
                   f'r="3" fill="#04c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
