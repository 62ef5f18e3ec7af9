import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kendall_renewal import renewal as R
from kendall_renewal.catalog import CLOSED_FORM_LAWS, catalog_lookup
from kendall_renewal.errors import DivergenceError, ParameterError
from kendall_renewal.measures import CDFMeasure

LAWS = {
    "dirac1": {},
    "uniform01": {},
    "pareto2alpha": {},
    "lackmem": {},
    "kendall_stable": {},
    "pareto": {"beta": 1.5},
    "cauchy_onesided": {},
    "student_like": {"beta": 3.0},
}


def law(name, alpha=1.0):
    return catalog_lookup(name, alpha=alpha, **LAWS[name])


def test_dirac_example():
    ev = R.moments_N(law("dirac1"), 1.0, 2.0)
    assert (ev.R, ev.EN2, ev.VarN) == pytest.approx((3.0, 13.0, 4.0), abs=1e-12)
    assert R.pmf_N(law("dirac1"), 1.0, 2.0, 0) == 0.0
    assert R.pmf_N(law("dirac1"), 1.0, 2.0, 1) == pytest.approx(0.25)
    assert R.pmf_N(law("dirac1"), 1.0, 2.0, 2) == pytest.approx(0.25)
    assert R.pmf_N(law("dirac1"), 1.0, 2.0, 3) == pytest.approx(0.1875)
    assert R.pmf_N(law("dirac1"), 1.0, 2.0, 4) == pytest.approx(0.125)


def test_closed_form_examples():
    assert R.renewal_R(law("pareto2alpha"), 1.0, 2.0) == pytest.approx(11 / 9, rel=1e-12)
    e = math.e
    assert R.renewal_R(law("kendall_stable"), 1.0, 1.0) == pytest.approx((2 * e - 1) / (e - 1) ** 2, rel=1e-12)


@pytest.mark.parametrize("name", CLOSED_FORM_LAWS)
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_against_law_closed_forms(name, alpha):
    d = law(name, alpha)
    for t in np.geomspace(0.05, 30, 40):
        exact = d.R_exact(t, alpha)
        if exact is None:
            continue
        assert R.renewal_R(d, alpha, t) == pytest.approx(exact, rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("name", sorted(LAWS))
def test_variance_forms_agree(name):
    d = law(name, 1.5)
    for t in (0.3, 1.0, 4.0, 25.0):
        pm = R.variance_N(d, 1.5, t)
        cdf = R.variance_N(d, 1.5, t, form="cdf")
        assert pm == pytest.approx(cdf, rel=1e-9, abs=1e-12)
        assert pm >= -1e-12
    with pytest.raises(ParameterError):
        R.variance_N(d, 1.5, 1.0, form="other")


@pytest.mark.parametrize("name", sorted(LAWS))
def test_series_matches_closed_form(name):
    d = law(name, 1.0)
    for t in np.geomspace(0.05, 10, 15):
        ev = R.moments_N(d, 1.0, t)
        assert R.series_R(d, 1.0, t) == pytest.approx(ev.R, abs=1e-12)
        assert R.series_EN2(d, 1.0, t) == pytest.approx(ev.EN2, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("name", sorted(LAWS))
def test_pmf_is_a_distribution_with_mean_R(name):
    d = law(name, 2.0)
    for t in (0.7, 3.0, 12.0):
        total, mean = R.pmf_sums(d, 2.0, t)
        assert total == pytest.approx(1.0, abs=1e-12)
        assert mean == pytest.approx(R.renewal_R(d, 2.0, t), rel=1e-10)


def test_pgf_values():
    d = law("uniform01")
    t = 0.7
    assert R.pgf_N(d, 1.0, t, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert R.pgf_N(d, 1.0, t, 0.0) == pytest.approx(1 - float(d.cdf(t)), abs=1e-15)
    h = 1e-6
    slope = (R.pgf_N(d, 1.0, t, 1.0) - R.pgf_N(d, 1.0, t, 1.0 - h)) / h
    assert slope == pytest.approx(R.renewal_R(d, 1.0, t), rel=1e-5)
    with pytest.raises(ParameterError):
        R.pgf_N(d, 1.0, t, 1.5)


def test_pgf_pole():
    # dirac1 at t = 2 has G = 1/2, so z G < 1 on [0, 1]; a pole needs G = 1
    with pytest.raises(ParameterError):
        R.pgf_N(law("dirac1"), 1.0, 2.0, -0.1)


@pytest.mark.parametrize("name", ["dirac1", "uniform01", "kendall_stable", "pareto"])
def test_pgf_coefficients_are_pmf(name):
    d = law(name, 1.0)
    for t in (0.6, 2.0, 7.0):
        coeffs = R.pgf_coefficients(d, 1.0, t, 12)
        expected = [R.pmf_N(d, 1.0, t, n) for n in range(13)]
        np.testing.assert_allclose(coeffs, expected, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0.05, 40.0), alpha=st.sampled_from([0.5, 1.0, 2.0]), z=st.floats(0.0, 1.0))
def test_pgf_matches_power_series(t, alpha, z):
    d = law("pareto2alpha", alpha)
    p = R._parts(d, alpha, t)
    nmax = 400
    if p.G ** nmax > 1e-15 and z > 0.5:
        return
    coeffs = R.pgf_coefficients(d, alpha, t, nmax)
    assert R.pgf_N(d, alpha, t, z) == pytest.approx(np.polyval(coeffs[::-1], z), abs=1e-10)


def test_below_support_is_zero():
    d = law("pareto2alpha")
    ev = R.moments_N(d, 1.0, 0.5)
    assert (ev.R, ev.EN2, ev.VarN) == (0.0, 0.0, 0.0)
    assert R.pmf_N(d, 1.0, 0.5, 0) == 1.0
    assert R.series_R(d, 1.0, 0.5) == 0.0


def test_parameter_errors():
    with pytest.raises(ParameterError):
        R.renewal_R(law("uniform01"), 1.0, 0.0)
    with pytest.raises(ParameterError):
        R.pmf_N(law("uniform01"), 1.0, 1.0, 1.5)


def test_divergence_when_G_reaches_one():
    # a law concentrated at 0 has G = 1 at every level
    at_zero = CDFMeasure(lambda x: 1.0 if x >= 0 else 0.0)
    at_zero.sf = lambda t: 0.0
    at_zero.G_exact = lambda t, a: 1.0
    at_zero.H_exact = lambda t, a: 0.0
    with pytest.raises(DivergenceError):
        R.renewal_R(at_zero, 1.0, 1.0)


@pytest.mark.parametrize("name", ["uniform01", "kendall_stable", "pareto2alpha", "cauchy_onesided"])
def test_R_prime(name):
    d = law(name, 1.0)
    for t in (1.3, 2.5, 8.0):
        h = 1e-5 * t
        fd = (R.renewal_R(d, 1.0, t + h) - R.renewal_R(d, 1.0, t - h)) / (2 * h)
        assert R.renewal_R_prime(d, 1.0, t) == pytest.approx(fd, rel=1e-6)


def test_renewal_transform_example():
    # at s = 1/2 the transform is G(2) / (1 - G(2)) = 0.75 / 0.25
    assert R.renewal_transform(law("uniform01"), 1.0, 0.5) == pytest.approx(3.0, abs=1e-9)
    assert R.renewal_transform(law("dirac1"), 1.0, 0.5) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ParameterError):
        R.renewal_transform(law("uniform01"), 1.0, 0.0)


@pytest.mark.parametrize("name", ["uniform01", "pareto2alpha", "kendall_stable"])
def test_fredholm_residuals(name):
    d = law(name, 1.0)
    res = R.fredholm_residual(d, 1.0, np.geomspace(0.3, 20, 8))
    assert res.transform < 1e-8
    assert res.measure < 1e-8


def test_renewal_grid():
    d = law("dirac1")
    rows = R.renewal_grid(d, 1.0, [0.5, 2.0])
    assert rows[0].R == 0.0
    assert rows[1].R == pytest.approx(3.0)
