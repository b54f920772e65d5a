import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bohrgroups import circle
from bohrgroups.circle import (AnalyticCoefficients, MuFunction, NonBracketingError, bohr_radius, bohr_sum,
                               h_closed_form, moebius_a0zero_coeffs, moebius_coeffs)

A_GRID = np.linspace(0, 0.999, 1000)


def test_moebius_coefficients_example():
    c = moebius_coeffs(0.5, 3).coeffs
    np.testing.assert_allclose(c, [0.5, -0.75, -0.375, -0.1875])


def test_moebius_series_matches_function():
    z = 0.3 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    for a in (0.0, 0.4, 0.9):
        c = moebius_coeffs(a)
        np.testing.assert_allclose(c.evaluate(z), (a - z) / (1 - a * z), atol=1e-13)


@pytest.mark.parametrize("a,r,expected", [
    (0.6, 0.4, 0.6 + 0.64 * 0.4 / 0.76),       # stays below 1
    (0.9, 0.4, 0.9 + 0.19 * 0.4 / 0.64),       # exceeds 1 once a > (1 - r) / (2 r)
    (0.5, 1 / 3, 0.8),                          # at the radius, a below 1
])
def test_bohr_sum_examples(a, r, expected):
    assert bohr_sum(moebius_coeffs(a), r) == pytest.approx(expected, abs=1e-12)


def test_bohr_sum_example_crosses_one():
    assert bohr_sum(moebius_coeffs(0.6), 0.4) < 1 < bohr_sum(moebius_coeffs(0.9), 0.4)


@given(a=st.floats(0, 0.99), r=st.floats(0, 0.9))
def test_a0zero_sum_matches_closed_form(a, r):
    assert abs(bohr_sum(moebius_a0zero_coeffs(a, 400), r) - h_closed_form(a, r)) <= 1e-9


@pytest.mark.parametrize("r", [0.0, 0.1, 0.25, 1 / 3])
def test_bohr_inequality_holds_up_to_one_third(r):
    sums = [bohr_sum(moebius_coeffs(a), r) for a in A_GRID]
    assert max(sums) <= 1 + 1e-12


@pytest.mark.parametrize("r", [0.34, 0.4, 0.6])
def test_beyond_one_third_some_member_violates(r):
    assert max(bohr_sum(moebius_coeffs(a, 2000), r) for a in A_GRID) > 1


def test_coefficient_validation():
    with pytest.raises(ValueError):
        moebius_coeffs(1.0)
    with pytest.raises(ValueError):
        moebius_coeffs(-0.1)
    with pytest.raises(ValueError):
        AnalyticCoefficients(np.array([]))
    with pytest.raises(ValueError):
        AnalyticCoefficients(np.array([1.0, np.nan]))


# ---------------------------------------------------------------------------
# radius search


def test_moebius_radius():
    res = bohr_radius("moebius", tol=1e-4)
    assert abs(res.radius - 1 / 3) <= 1e-4 and not res.saturated
    assert res.sup_at_radius <= 1 + 1e-12 and res.max_modulus <= 1 + 1e-6


def test_a0zero_radius_is_inverse_root_two():
    res = bohr_radius("moebius-a0zero", tol=1e-4)
    assert abs(res.radius - 1 / math.sqrt(2)) <= 1e-4


def test_zero_family_saturates():
    res = bohr_radius("zero")
    assert res.saturated and res.radius == circle.R_CAP
    with pytest.raises(NonBracketingError):
        bohr_radius("zero", saturate_ok=False)


def test_unknown_family():
    with pytest.raises(ValueError):
        circle.family("blaschke")


def test_unbounded_family_rejected():
    fam = circle.CoefficientFamily("double", lambda p, N: 2 * circle._moebius_moduli(p, N),
                                   lambda a: (lambda z: 2 * (a - z) / (1 - a * z)), np.array([0.5]))
    with pytest.raises(ValueError):
        fam.certify()


# ---------------------------------------------------------------------------
# the circle as a compact group


@pytest.mark.parametrize("variant", ["i", "ii", "iii"])
def test_circle_reduction_budget_is_tight_at_one_third(variant):
    rep = circle.thm1_circle_reduction(0.5, 1 / 3, variant=variant)
    assert rep.constraint_value == pytest.approx(0.5, abs=1e-12)
    assert rep.constraint_satisfied and rep.passed


@given(a=st.floats(0, 0.999), theta=st.floats(0, 2 * math.pi))
def test_circle_reduction_holds_at_one_third(a, theta):
    rep = circle.thm1_circle_reduction(a, 1 / 3, theta)
    assert rep.lhs <= 1 + 1e-9


def test_circle_reduction_approaches_one():
    coeffs = np.stack([moebius_coeffs(a).coeffs for a in A_GRID])
    lhs, _ = circle.circle_reduction_batch(coeffs, 1 / 3, 0.0)
    assert 0.999 < lhs.max() <= 1 + 1e-9


def test_circle_reduction_rejects_bad_radius():
    with pytest.raises(ValueError):
        circle.thm1_circle_reduction(0.5, 1.0)


# ---------------------------------------------------------------------------
# the f_mu family and the dropped-term counterexample


def test_remark3_examples():
    assert circle.remark3_lhs(math.pi / 2) == pytest.approx(0.25)
    assert circle.remark3_lhs(1e-3) == pytest.approx(1 / (4 * math.tan(5e-4)))
    assert circle.remark3_lhs(math.pi / 2, 2) == pytest.approx(1 / 16)


def test_remark3_is_decreasing_and_unbounded():
    mus = np.geomspace(1e-8, math.pi / 2, 200)
    vals = circle.remark3_lhs(mus)
    assert np.all(np.diff(vals) < 0)
    assert vals[0] > 1e6
    rows = circle.remark3_series(1e-4, 10, r0=0.5)
    assert len(rows) == 10 and rows[0][1] > rows[-1][1] and rows[0][2] == 2.0


@pytest.mark.parametrize("mu,n", [(0.0, 1), (2.0, 1), (-0.1, 1), (0.5, 0), (0.5, 1.5)])
def test_remark3_domain(mu, n):
    with pytest.raises(ValueError):
        circle.remark3_lhs(mu, n)


@pytest.mark.parametrize("mu", np.geomspace(1e-2, 1.5, 20))
def test_mu_function_is_admissible(mu):
    rep = circle.mu_function_check(MuFunction(float(mu)))
    assert rep.passed, rep.details
    assert rep.details["coefficient_residual"] <= 1e-6
    assert rep.details["analytic_bound"] < 1


def test_truncation_is_flagged_not_failed():
    rep = circle.mu_function_check(MuFunction(0.5, 200))
    assert rep.details["truncation_flagged"] and rep.passed
    assert MuFunction(0.5, 200).tail_bound() == pytest.approx(math.sin(0.5) * 0.5 * (1 / 200 - 1 / 2 / 200 ** 2),
                                                              rel=1e-2)


def test_mu_function_validation():
    with pytest.raises(ValueError):
        MuFunction(0.0)
    with pytest.raises(ValueError):
        MuFunction(0.5, 0)
    with pytest.raises(ValueError):
        circle.mu_function_check(MuFunction(0.5, 200), grid=256)
