from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fareylab.limit_analysis import (decay_ratios, distance_to_segment,
                                     endpoint_convergence_report, laminations_of, segment_fit,
                                     sweep_report)
from fareylab.pairing import simplex_point
from fareylab.projective import ProjectivePoint, proj_distance, projectivize
from fareylab.ray_model import ModelParams

positive = st.fractions(Fraction(1, 1000), 1000)


def test_projectivize_example():
    assert projectivize([1, 1, 2]).coords == (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ValueError):
        projectivize([0, 0])


@given(st.lists(positive, min_size=1, max_size=8), positive)
def test_projectivize_scale_invariant_and_idempotent(v, c):
    p = projectivize(v)
    assert projectivize([c * x for x in v]) == p
    assert projectivize(p.coords) == p
    assert sum(p.coords) == 1


def test_distance_examples():
    a, b = ProjectivePoint((1, 0)), ProjectivePoint((0, 1))
    assert proj_distance(a, a) == 0
    assert proj_distance(a, b) == 1
    with pytest.raises(ValueError):
        proj_distance(a, ProjectivePoint((1, 0, 0)))


@given(st.lists(st.tuples(positive, positive, positive), min_size=3, max_size=3))
def test_distance_is_a_metric(triples):
    u, v, w = (projectivize(t) for t in triples)
    assert proj_distance(u, v) == proj_distance(v, u)
    assert proj_distance(u, w) <= proj_distance(u, v) + proj_distance(v, w)


def test_segment_distance_endpoints(default_schedule, family):
    lam0, lam1 = laminations_of(default_schedule)
    prec = Fraction(1, 10**9)
    for t in (0, Fraction(1, 2), 1):
        v = simplex_point(t, lam0, lam1, family, prec / 10)
        d = distance_to_segment(v, lam0, lam1, family, prec)
        assert d.width <= prec
        assert d.hi <= prec


def test_segment_fit_recovers_parameter(default_schedule, family):
    lam0, lam1 = laminations_of(default_schedule)
    for t in (Fraction(1, 4), Fraction(2, 3)):
        v = simplex_point(t, lam0, lam1, family, Fraction(1, 10**12))
        fit = segment_fit(v, lam0, lam1, family, Fraction(1, 10**9))
        assert abs(fit.t - t) < Fraction(1, 10**6)


def test_perturbed_point_against_grid_search(default_schedule, family):
    lam0, lam1 = laminations_of(default_schedule)
    base = simplex_point(Fraction(1, 3), lam0, lam1, family, Fraction(1, 10**14))
    coords = list(base.coords)
    coords[1] += Fraction(1, 1000)
    v = projectivize(coords)
    prec = Fraction(1, 10**7)
    d = distance_to_segment(v, lam0, lam1, family, prec)
    assert d.lo > 0 and d.width <= prec
    # brute force over t with step 1e-4 (points computed independently per t)
    ends = [simplex_point(t, lam0, lam1, family, Fraction(1, 10**14)) for t in (0, 1)]
    best = min(proj_distance(v, projectivize([(1 - u) * a + u * b for a, b in zip(*[e.coords for e in ends])]))
               for u in (Fraction(j, 10**4) for j in range(10**4 + 1)))
    assert d.lo <= best + Fraction(1, 10**12)
    assert best - d.hi <= Fraction(1, 10**4)  # grid step bounds the brute-force excess


def test_endpoint_reports(default_schedule, family):
    for parity in (0, 1):
        rep = endpoint_convergence_report(default_schedule, family, ModelParams(), parity)
        assert rep.strictly_decreasing_from(4)
        assert rep.final_distance().hi < Fraction(1, 1000)
        for row in rep.rows:
            for diag in row.curves.values():
                assert diag.active_ratio == 1  # first claim holds exactly in-model
                assert diag.alpha_within_budget


def test_sweep_theta_zero_matches_endpoint(default_schedule, family):
    rep = endpoint_convergence_report(default_schedule, family, ModelParams(), 0)
    sw = sweep_report(default_schedule, family, ModelParams(), [0])
    assert [r.point for r in sw.rows[Fraction(0)]] == [r.point for r in rep.rows]


def test_sweep_fit_parameter_converges(default_schedule, family):
    sw = sweep_report(default_schedule, family, ModelParams(), [Fraction(1, 4), Fraction(3, 4)])
    for theta, rows in sw.rows.items():
        assert abs(rows[-1].fit_t - theta) < Fraction(1, 10**6)
    assert sw.min_pairwise_distance() >= Fraction(1, 100)


def test_decay_first_ratio_decreasing(default_schedule, family):
    for d in family:
        first = [a for _, a, _ in decay_ratios(d, default_schedule)]
        assert all(b < a for a, b in zip(first, first[1:]))
        assert first[4] < Fraction(1, 100)  # k = 8
