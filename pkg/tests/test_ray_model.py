from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fareylab.pairing import TestCurve, pair_delta_gamma
from fareylab.ray_model import (ModelParams, active_index, length_of, length_terms, sweep_time,
                                twist_gamma_k, twist_gamma_k1, width_of, xy_of)
from fareylab.curve_algebra import ArcClass

from oracles import collar_width

DEFAULT = ModelParams()


def test_active_index(default_schedule):
    s = default_schedule
    assert active_index(s.tm(3), s) == 3
    assert active_index((s.tm(3) + s.tm(4)) / 2, s) == 3
    assert active_index(s.tm(4) - Fraction(1, 2**200), s) == 3
    assert active_index(s.tm(4), s) == 4
    with pytest.raises(ValueError):
        active_index(s.tm(2) - Fraction(1, 10**9), s)
    with pytest.raises(ValueError):
        active_index(s.tm(s.kmax + 1), s)


def test_width_fixed_point():
    import mpmath
    with mpmath.workdps(50):
        ell = Fraction(mpmath.nstr(2 * mpmath.asinh(1), 45, min_fixed=-1, max_fixed=1))
    assert abs(width_of(ell) - ell) < Fraction(1, 10**17)


def test_width_against_oracle():
    for ell in (Fraction(1), Fraction(1, 3), Fraction(5, 2), Fraction(1, 1000)):
        assert abs(width_of(ell) - collar_width(ell)) <= Fraction(1, 2**64)
    assert abs(float(width_of(1)) - 2.8136582274945905) < 1e-15
    assert width_of(1).denominator <= 2**64


@given(st.fractions(Fraction(1, 100), 20), st.fractions(Fraction(1, 100), 20))
def test_width_strictly_decreasing(a, b):
    if a != b:
        lo, hi = sorted((a, b))
        if hi - lo > Fraction(1, 10**6):
            assert width_of(lo) > width_of(hi)


def test_twists(default_schedule, family):
    s, d = default_schedule, family[0]
    t = s.tm(5)
    assert twist_gamma_k(d, t, s, DEFAULT) == s.e(5)
    assert twist_gamma_k(d, t, s, ModelParams(twist_offset=3)) == s.e(5) + 3
    for law in ("calibrated", "geometric"):
        assert twist_gamma_k1(d, t, s, ModelParams(interp=law)) == 1


def test_geometric_half_is_square_root(default_schedule, family):
    s = default_schedule
    geo = ModelParams(interp="geometric")
    tw = twist_gamma_k1(family[0], sweep_time(6, Fraction(1, 2), s), s, geo)
    assert abs(tw * tw / s.e(7) - 1) < Fraction(1, 10**12)


def test_twist_approaches_next_coefficient(default_schedule, family):
    s = default_schedule
    for law in ("calibrated", "geometric"):
        p = ModelParams(interp=law)
        near = twist_gamma_k1(family[0], sweep_time(6, 1 - Fraction(1, 10**80), s), s, p)
        assert near <= s.e(7)
        assert near / s.e(7) > Fraction(99, 100)


@given(st.fractions(0, Fraction(999, 1000)), st.fractions(0, Fraction(999, 1000)))
def test_twist_monotone_in_theta(a, b):
    from fareylab.schedule import generate
    s = generate(8)
    lo, hi = sorted((a, b))
    for law in ("calibrated", "geometric"):
        p = ModelParams(interp=law)
        assert twist_gamma_k1(None, sweep_time(4, lo, s), s, p) <= twist_gamma_k1(None, sweep_time(4, hi, s), s, p)


def test_length_formula_instance(default_schedule):
    s = default_schedule
    k = 4
    d = TestCurve((ArcClass(1, 0),), (ArcClass(1, 0),), "d")
    i_k, i_k1 = pair_delta_gamma(d, k, s), pair_delta_gamma(d, k + 1, s)
    t = s.tm(k)
    w_a = width_of(1)
    f1, f2 = s.f1(t), s.f2(t)
    expect = i_k * (w_a + s.e(k)) + i_k1 * (w_a + 1) + 2 * (width_of(f1) + f1 * f2) + (i_k + i_k1 + 2)
    assert length_of(d, t, s, DEFAULT) == expect


def test_collar_lower_bound_and_linearity(default_schedule, family):
    s = default_schedule
    for k in range(2, s.kmax + 1):
        for theta in (0, Fraction(1, 3)):
            t = sweep_time(k, theta, s)
            for d in family:
                ell = length_of(d, t, s, DEFAULT)
                assert ell >= pair_delta_gamma(d, k, s) * width_of(1)
                assert length_of(d.scaled(2), t, s, ModelParams(c_O=1)) == 2 * ell


def test_xy(default_schedule):
    s = default_schedule
    w_a = width_of(1)
    for k in range(2, s.kmax + 1):
        assert xy_of(s.tm(k), s, DEFAULT) == (w_a + s.e(k), w_a + 1)
    p = ModelParams(ell_active=Fraction(1, 2), twist_offset=-10)
    for k in range(2, s.kmax + 1):
        for theta in (0, Fraction(1, 2), Fraction(9, 10)):
            x, _ = xy_of(sweep_time(k, theta, s), s, p)
            assert abs(x - p.ell_active * s.e(k)) <= width_of(p.ell_active) + p.ell_active * 10


def test_length_terms_sum(default_schedule, family):
    s = default_schedule
    terms = length_terms(family[2], s.tm(6), s, DEFAULT)
    assert terms.total == length_of(family[2], s.tm(6), s, DEFAULT)
    assert min(terms.gamma_k, terms.gamma_k1, terms.alpha, terms.error) > 0


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(ell_active=0)
    with pytest.raises(ValueError):
        ModelParams(c_O=-1)
    with pytest.raises(ValueError):
        ModelParams(interp="linear")
