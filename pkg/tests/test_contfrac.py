from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fareylab.contfrac import (CFSide, CoefficientCapError, I_of, check_cap, continuant_oracle,
                               continuant_terms, convergents, exceeds_digits, twist_signs,
                               value_interval)
from fareylab.curve_algebra import Slope

from oracles import cf_value

coeff_lists = st.lists(st.integers(4, 40), min_size=1, max_size=14)


def test_four_four_four():
    side = CFSide((4, 4, 4))
    assert convergents(side, 3) == [(0, 1), (1, 4), (4, 17), (17, 72)]
    assert side.curves(2) == [Slope(1, 0), Slope(0, 1), Slope(1, 4), Slope(4, 17)]


def test_rejects_small_coefficients():
    with pytest.raises(ValueError, match="e >= 4"):
        CFSide((4, 3))


def test_index_bounds():
    side = CFSide((5, 6))
    with pytest.raises(IndexError):
        side.convergent(3)
    with pytest.raises(IndexError):
        value_interval(side, 3)


def test_continuant_terms_count_is_fibonacci():
    counts = [sum(1 for _ in continuant_terms(n)) for n in range(10)]
    assert counts == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_oracle_refuses_large_index():
    with pytest.raises(ValueError):
        continuant_oracle(CFSide((4,) * 25), 21)


def test_I_of_is_subset_sum():
    side = CFSide((4, 5, 7))
    assert I_of(side, 0) == 1
    assert I_of(side, 3) == 5 * 6 * 8


@given(coeff_lists)
def test_convergents_match_direct_evaluation(coeffs):
    side = CFSide(tuple(coeffs))
    for i, (p, q) in enumerate(convergents(side, len(coeffs))):
        assert Fraction(p, q) == cf_value(coeffs[:i])


@given(st.lists(st.integers(4, 9), min_size=1, max_size=12))
def test_continuant_oracle_agrees(coeffs):
    side = CFSide(tuple(coeffs))
    for i in range(len(coeffs) + 1):
        assert continuant_oracle(side, i) == side.convergent(i)[1]


@given(coeff_lists)
def test_consecutive_convergents_are_adjacent(coeffs):
    side = CFSide(tuple(coeffs))
    seq = side.curves(len(coeffs))
    for a, b in zip(seq, seq[1:]):
        assert abs(a.p * b.q - b.p * a.q) == 1


@given(coeff_lists, st.lists(st.integers(4, 40), min_size=1, max_size=5))
def test_value_interval_encloses_every_extension(coeffs, tail):
    side = CFSide(tuple(coeffs))
    x = cf_value(coeffs + tail)
    for i in range(1, len(coeffs) + 1):
        iv = value_interval(side, i)
        q = side.convergent(i)[1]
        assert iv.contains(x)
        assert iv.width <= Fraction(1, q * q)


@given(coeff_lists)
def test_twist_signs_alternate(coeffs):
    assert twist_signs(coeffs) == [(-1) ** j for j in range(len(coeffs))]


def test_digit_cap():
    assert not exceeds_digits(10**5 - 1, 5)
    assert exceeds_digits(10**5, 5)
    check_cap(99, 0, digits=2)
    with pytest.raises(CoefficientCapError):
        check_cap(100, 7, digits=2)


def test_cap_env(monkeypatch):
    from fareylab.contfrac import cap_digits
    monkeypatch.setenv("FAREYLAB_CAP_DIGITS", "12")
    assert cap_digits() == 12
