import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kendall_renewal.catalog import catalog_lookup
from kendall_renewal.errors import ParameterError, RunawayError
from kendall_renewal.renewal import moments_N, pmf_N
from kendall_renewal.rng import PathStreams
from kendall_renewal.walk import (
    WalkConfig,
    count_renewals,
    joint_exceedance_check,
    lemma2_check,
    mc_renewal_stats,
    sample_endpoints,
    sample_pair_convolution,
    sample_path,
    sample_paths,
    simulate_counts,
    step,
)


def config(name="uniform01", alpha=1.0, seed=7, **params):
    return WalkConfig(alpha, catalog_lookup(name, alpha=alpha, **params), seed)


def test_step_examples():
    assert step(1.0, 1.0, 0.5, 2.0, 1.0) == 2.0
    assert step(1.0, 2.0, 0.7, 1.5, 1.0) == 2.0
    assert step(1.0, 2.0, 0.3, 1.5, 1.0) == 3.0
    # from 0 the walk jumps to the step itself
    assert step(0.0, 0.4, 0.01, 5.0, 1.0) == 0.4
    with pytest.raises(ParameterError):
        step(1.0, 1.0, 0.5, 0.9, 1.0)
    with pytest.raises(ParameterError):
        step(1.0, 1.0, 1.0, 2.0, 1.0)


def test_pair_convolution():
    rng = np.random.default_rng(3)
    assert sample_pair_convolution(0.0, 1.7, 1.0, rng) == 1.7
    draws = sample_pair_convolution(1.0, 1.0, 2.0, rng, size=200_000)
    assert np.all(draws >= 1.0)
    # equal arguments: stay at max with probability 1 - rho = 0
    assert np.mean(draws == 1.0) == pytest.approx(0.0, abs=1e-12)
    draws = sample_pair_convolution(0.5, 1.0, 1.0, rng, size=200_000)
    assert np.mean(draws == 1.0) == pytest.approx(0.5, abs=0.005)
    with pytest.raises(ParameterError):
        sample_pair_convolution(-1.0, 1.0, 1.0, rng)


def test_paths_are_nondecreasing_and_start_with_step():
    cfg = config("pareto2alpha")
    path = sample_path(cfg, 50, path_id=4)
    assert len(path) == 50
    assert path.is_nondecreasing()
    streams = PathStreams(cfg.seed)
    first_step = cfg.step.quantile(streams.uniforms(streams.path_keys(4), 0))[0]
    assert path.values[0] == first_step


def test_worker_count_and_offsets_do_not_change_results():
    cfg = config("kendall_stable", seed=99)
    serial = sample_paths(cfg, 5, 70_000, workers=1)
    threaded = sample_paths(cfg, 5, 70_000, workers=4)
    np.testing.assert_array_equal(serial, threaded)
    np.testing.assert_array_equal(sample_paths(cfg, 5, 10, first_path=100), serial[100:110])
    np.testing.assert_array_equal(sample_endpoints(cfg, 5, 70_000, workers=3), serial[:, -1])


def test_counts_agree_with_paths():
    cfg = config("uniform01", seed=12)
    t = 3.0
    counts = simulate_counts(cfg, t, 2000)
    paths = sample_paths(cfg, int(counts.max()) + 1, 2000)
    np.testing.assert_array_equal(counts, (paths <= t).sum(axis=1))
    assert count_renewals(cfg, t, path_id=17) == counts[17]


def test_dirac_counts():
    cfg = config("dirac1")
    assert np.all(simulate_counts(cfg, 0.5, 500) == 0)
    counts = simulate_counts(cfg, 2.0, 50_000)
    for n in range(4):
        assert np.mean(counts == n) == pytest.approx(pmf_N(cfg.step, 1.0, 2.0, n), abs=0.01)


def test_no_renewal_probability():
    cfg = config("uniform01", seed=1)
    counts = simulate_counts(cfg, 0.4, 100_000)
    assert np.mean(counts == 0) == pytest.approx(0.6, abs=0.005)


def test_runaway_is_reported():
    cfg = WalkConfig(1.0, catalog_lookup("uniform01"), 1, max_steps=5)
    with pytest.raises(RunawayError):
        simulate_counts(cfg, 1e6, 10)
    with pytest.raises(RunawayError):
        sample_paths(cfg, 6, 1)


def test_config_validation():
    with pytest.raises(ParameterError):
        config(seed=-1)
    with pytest.raises(ParameterError):
        config(seed=1.5)
    with pytest.raises(ParameterError):
        WalkConfig(0.0, catalog_lookup("uniform01"), 1)
    with pytest.raises(ParameterError):
        mc_renewal_stats(config(), 1.0, 50)


def test_mc_moments_match_exact():
    cfg = config("pareto2alpha", seed=5)
    stats = mc_renewal_stats(cfg, 5.0, 100_000, workers=2)
    exact = moments_N(cfg.step, 1.0, 5.0)
    assert abs(stats.mean - exact.R) < 4 * stats.se_mean
    assert abs(stats.var - exact.VarN) < 4 * stats.se_var


def test_joint_exceedance_check():
    cfg = config("uniform01", seed=8)
    r = joint_exceedance_check(cfg, [1, 3, 4], 1.2, 60_000)
    assert abs(r.empirical_a - r.analytic_a) < 4 * r.se_a + 1e-12
    assert abs(r.empirical_b - r.analytic_b) < 4 * r.se_b
    with pytest.raises(ParameterError):
        joint_exceedance_check(cfg, [3, 2], 1.0, 100)
    assert lemma2_check is joint_exceedance_check


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**63), first=st.integers(0, 10**9))
def test_streams_are_pure_functions_of_seed_path_and_draw(seed, first):
    a, b = PathStreams(seed), PathStreams(seed)
    keys = a.path_keys(np.arange(first, first + 8))
    np.testing.assert_array_equal(keys, b.path_keys(np.arange(first, first + 8)))
    u = a.uniforms(keys, 5)
    assert np.all((u > 0) & (u < 1))
    np.testing.assert_array_equal(u, b.uniforms(b.path_keys(np.arange(first, first + 8)), 5))
