from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fareylab.curve_algebra import (INFINITY, ZERO, ArcClass, Slope, algebraic_intersection,
                                    dehn_twist, farey_adjacent, intersection_arc_curve,
                                    intersection_slopes)

from oracles import torus_crossings_generic

small = st.integers(-12, 12)


@st.composite
def slopes(draw):
    p, q = draw(small), draw(st.integers(0, 12))
    if p == 0 and q == 0:
        q = 1
    return Slope(p, q)


def test_normalization():
    assert Slope(2, 4) == Slope(1, 2)
    assert Slope(-1, -3) == Slope(1, 3)
    assert Slope(-5, 0) == INFINITY
    assert str(Slope(3, -6)) == "-1/2"
    with pytest.raises(ValueError):
        Slope(0, 0)


def test_parse_and_value():
    assert Slope.parse("4/17") == Slope(4, 17)
    assert Slope.parse("3") == Slope(3, 1)
    assert Slope(4, 17).value == Fraction(4, 17)
    with pytest.raises(ValueError):
        INFINITY.value


def test_arc_rejects_zero():
    with pytest.raises(ValueError):
        ArcClass(0, 0)
    assert ArcClass(2, 0).vector() == (2, 0)  # arcs need not be primitive


def test_known_intersections():
    assert intersection_slopes(INFINITY, ZERO) == 1
    assert intersection_slopes(Slope(1, 4), Slope(4, 17)) == 1
    assert intersection_slopes(Slope(1, 2), Slope(1, 3)) == 1
    assert intersection_slopes(Slope(2, 3), Slope(2, 3)) == 0
    assert intersection_arc_curve(ArcClass(1, 0), Slope(4, 17)) == 17
    assert intersection_arc_curve(ArcClass(0, 1), Slope(4, 17)) == 4


def test_twist_examples():
    assert dehn_twist(ZERO, INFINITY, 4) == Slope(1, 4)
    assert dehn_twist(Slope(1, 4), ZERO, -4) == Slope(4, 17)
    assert dehn_twist(Slope(1, 4), ArcClass(1, 0), 1) == ArcClass(5, 16)


@given(slopes(), slopes())
def test_intersection_matches_torus_crossings(u, v):
    assert intersection_slopes(u, v) == torus_crossings_generic(u.vector(), v.vector())


@given(slopes(), slopes(), st.integers(-6, 6))
def test_twist_fixes_core_and_preserves_pairing_with_it(g, v, n):
    assert dehn_twist(g, g, n) == g
    assert intersection_slopes(dehn_twist(g, v, n), g) == intersection_slopes(v, g)


@given(slopes(), slopes(), st.integers(-6, 6), st.integers(-6, 6))
def test_twist_powers_compose(g, v, m, n):
    assert dehn_twist(g, dehn_twist(g, v, m), n) == dehn_twist(g, v, m + n)


@given(slopes(), slopes())
def test_adjacency_is_unit_pairing(u, v):
    assert farey_adjacent(u, v) == (intersection_slopes(u, v) == 1)
    assert algebraic_intersection(u.vector(), v.vector()) == -algebraic_intersection(v.vector(), u.vector())
