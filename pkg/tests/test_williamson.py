import math
import warnings

import numpy as np
import pytest

from kendall_renewal import williamson as W
from kendall_renewal.catalog import CATALOG, catalog_lookup
from kendall_renewal.errors import ParameterError, PrecisionWarning
from kendall_renewal.kernels import char_fn, convolved_measure, kendall

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


def test_every_catalog_law_is_covered():
    assert set(LAWS) == set(CATALOG)


def test_G_and_H_examples():
    dirac, unif = law("dirac1"), law("uniform01")
    assert W.williamson_G(dirac, 1, 2) == 0.5
    assert W.williamson_G(unif, 1, 2) == 0.75
    assert W.williamson_G(law("pareto2alpha"), 1, 0.9) == 0.0
    assert W.moment_H(dirac, 1, 1) == 1.0
    assert W.moment_H(dirac, 1, 0.999) == 0.0
    assert W.moment_H(unif, 1, 1) == 0.5
    assert W.moment_H(law("kendall_stable"), 1, 1) == pytest.approx(math.exp(-1), abs=1e-15)
    assert W.williamson_G(law("kendall_stable"), 1, 1) == pytest.approx(math.exp(-1), abs=1e-15)


def test_m_alpha():
    assert W.m_alpha(law("dirac1"), 1) == 1
    for a in (0.5, 1, 2):
        assert W.m_alpha(law("uniform01"), a) == pytest.approx(1 / (a + 1))
        assert W.m_alpha(law("pareto2alpha", a), a) == pytest.approx(2)
    assert W.m_alpha(catalog_lookup("pareto", beta=1.0), 2.0) == math.inf
    # quadrature fallback for a law without a closed form moment
    assert W.m_alpha(law("cauchy_onesided"), 0.5) == pytest.approx(1 / math.cos(math.pi / 4), rel=1e-8)


@pytest.mark.parametrize("name", sorted(LAWS))
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_numeric_matches_analytic(name, alpha):
    d = law(name, alpha)
    for t in np.geomspace(0.05, 50, 40):
        g_exact, h_exact = d.G_exact(t, alpha), d.H_exact(t, alpha)
        if g_exact is not None:
            assert W.williamson_G(d, alpha, t, "numeric") == pytest.approx(g_exact, abs=1e-9)
        if h_exact is not None:
            assert W.moment_H(d, alpha, t, "numeric") == pytest.approx(h_exact, abs=1e-9, rel=1e-12)


def test_method_selection():
    d = law("student_like")
    with pytest.raises(ParameterError):
        W.williamson_G(d, 1.0, 2.0, method="analytic")
    with pytest.raises(ParameterError):
        W.williamson_G(d, 1.0, 2.0, method="bogus")
    with pytest.raises(ParameterError):
        W.williamson_G(d, 0.0, 2.0)


def test_inversion_examples():
    pair = W.williamson_pair(law("dirac1"), 1.0)
    assert W.invert_williamson(pair, 2.0) == 1.0
    pareto = law("pareto2alpha")
    assert W.invert_williamson(W.williamson_pair(pareto, 1.0), 2.0) == pytest.approx(0.75)
    # derivative form from G alone
    g_only = W.WilliamsonPair(alpha=1.0, G=lambda t: max(1 - 1 / t, 0.0) ** 2)
    assert W.invert_williamson(g_only, 2.0) == pytest.approx(0.75, abs=1e-8)
    lack = law("lackmem")
    assert W.invert_williamson(W.williamson_pair(lack, 1.0), 0.5) == pytest.approx(0.5)


def test_inversion_warns_when_step_underflows():
    g_only = W.WilliamsonPair(alpha=1.0, G=lambda t: 0.0)
    with pytest.warns(PrecisionWarning):
        W.invert_williamson(g_only, 1e-320, rel_step=1e-6)


@pytest.mark.parametrize("name", sorted(LAWS))
def test_roundtrip_from_numeric_transforms(name):
    d = law(name, 1.0)
    pair = W.williamson_pair(d, 1.0, method="numeric")
    for t in np.geomspace(0.05, 50, 60):
        assert W.invert_williamson(pair, t) == pytest.approx(float(d.cdf(t)), abs=1e-8)


def test_G_plus_scaled_H_is_a_cdf():
    for name in LAWS:
        d = law(name, 1.5)
        values = [W.williamson_G(d, 1.5, t) + t**-1.5 * W.moment_H(d, 1.5, t) for t in np.geomspace(0.01, 100, 80)]
        assert all(0 <= v <= 1 + 1e-12 for v in values)
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_Fn_examples():
    dirac = law("dirac1")
    assert W.Fn_cdf(dirac, 1, 1, 2) == 1.0
    assert W.Fn_cdf(dirac, 1, 2, 2) == 0.75
    assert W.Fn_cdf(dirac, 1, 3, 2) == 0.5
    unif = law("uniform01")
    for t in (0.3, 0.8, 3.0):
        assert W.Fn_cdf(unif, 1.0, 1, t) == pytest.approx(float(unif.cdf(t)), abs=1e-15)
    with pytest.raises(ParameterError):
        W.Fn_cdf(unif, 1.0, 0, 1.0)


@pytest.mark.parametrize("name", ["uniform01", "pareto2alpha", "kendall_stable", "cauchy_onesided"])
def test_Fn_monotone_in_n(name):
    d = law(name, 1.0)
    for t in np.geomspace(0.1, 30, 25):
        values = [W.Fn_cdf(d, 1.0, n, t) for n in range(1, 11)]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))


def test_Fn_transform_is_power_of_G():
    a = 1.0
    unif = law("uniform01")
    measure = unif
    for n in range(2, 4):
        measure = convolved_measure(measure, unif, a)
        for t in (0.3, 0.6):
            # transform at kernel argument t is G(1/t)
            assert char_fn(measure, kendall(a), t) == pytest.approx(W.williamson_G(unif, a, 1 / t) ** n, abs=1e-8)


def test_log_Fn_matches_direct_and_extends_it():
    unif = law("uniform01")
    G, H = W.williamson_G(unif, 1.0, 20.0), W.moment_H(unif, 1.0, 20.0)
    assert math.exp(W.log_Fn(G, H, 1.0, 7, 20.0)) == pytest.approx(W.Fn_from_GH(G, H, 1.0, 7, 20.0), rel=1e-12)
    assert W.Fn_from_GH(G, H, 1.0, 100_000, 20.0) == 0.0
    assert math.isfinite(W.log_Fn(G, H, 1.0, 100_000, 20.0))


@pytest.mark.parametrize("name", ["dirac1", "uniform01", "student_like"])
def test_Fn_cdf_many_matches_scalar(name):
    d = law(name, 1.0)
    ts = np.array([[0.3, 1.0, 2.0], [2.0, 7.5, 0.3]])
    many = W.Fn_cdf_many(d, 1.0, 3, ts)
    assert many.shape == ts.shape
    for t, v in zip(ts.ravel(), many.ravel()):
        assert v == pytest.approx(W.Fn_cdf(d, 1.0, 3, t), abs=1e-15)
    with pytest.raises(ParameterError):
        W.Fn_cdf_many(d, 1.0, 0, ts)
    with pytest.raises(ParameterError):
        W.Fn_cdf_many(d, 1.0, 2, [0.0, 1.0])
