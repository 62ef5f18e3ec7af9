"""The twelve acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also repeated in the
terminal summary) with the worst check, its threshold and the elapsed time
against the criterion's runtime budget. Most criteria run a named
verification suite, which is what ``kendall-renewal verify`` executes.
"""

import time

import pytest

from kendall_renewal.verification import DEFAULT_SEED, SuiteOptions, run_suite

WORKERS = 4


def _worst(checks):
    failed = [c for c in checks if not c.passed]
    if failed:
        return failed[0]
    return max(checks, key=lambda c: c.value / c.threshold if c.threshold else c.value)


def _report(log, number, title, checks, elapsed, budget, expected_thresholds=None):
    worst = _worst(checks)
    passed = all(c.passed for c in checks) and elapsed < budget
    line = (
        f"criterion {number}: {'PASS' if passed else 'FAIL'} {title} | "
        f"{len(checks)} checks, worst {worst.name} = {worst.value:.3g} (limit {worst.threshold:.3g}) | "
        f"{elapsed:.1f}s (budget {budget:g}s)"
    )
    print(line)
    log.append(line)
    if expected_thresholds is not None:
        assert {c.threshold for c in checks} <= set(expected_thresholds)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"


def _run(suite, **kwargs):
    opts = SuiteOptions(seed=DEFAULT_SEED, workers=WORKERS, **kwargs)
    start = time.perf_counter()
    checks = run_suite(suite, opts)
    return checks, time.perf_counter() - start


def test_criterion_01_closed_forms(acceptance_log):
    checks, elapsed = _run("closed-forms")
    names = {c.name for c in checks}
    assert {"dirac1[alpha=1] R(2)", "uniform01[alpha=1] R(0.5)", "pareto2alpha[alpha=1] R(2)",
            "lackmem[alpha=1] R(0.5)", "kendall_stable[alpha=1] R(1)"} <= names
    _report(acceptance_log, 1, "closed-form renewal functions", checks, elapsed, 1.0, {1e-9})


def test_criterion_02_series(acceptance_log):
    checks, elapsed = _run("series")
    assert len({c.name.split("[")[0] for c in checks}) == 5
    _report(acceptance_log, 2, "series vs closed form", checks, elapsed, 5.0, {1e-12})


def test_criterion_03_roundtrip(acceptance_log):
    checks, elapsed = _run("roundtrip")
    assert len({c.name.split("[")[0] for c in checks}) == 8
    _report(acceptance_log, 3, "Williamson round trip", checks, elapsed, 5.0, {1e-8})


def test_criterion_04_simulator(acceptance_log):
    checks, elapsed = _run("simulator")
    # 3 laws x 3 alphas x n = 1..5
    assert len(checks) == 45
    _report(acceptance_log, 4, "simulated S_n vs F_n", checks, elapsed, 60.0)
    assert all(c.threshold == pytest.approx(1.628 / 100_000**0.5, rel=1e-3) for c in checks)


def test_criterion_05_pair(acceptance_log):
    checks, elapsed = _run("pair")
    _report(acceptance_log, 5, "delta1 convolved with delta1 is Pareto(2 alpha)", checks, elapsed, 5.0)


def test_criterion_06_fredholm(acceptance_log):
    checks, elapsed = _run("fredholm")
    assert len({c.name.split("[")[0] for c in checks}) == 8
    _report(acceptance_log, 6, "renewal equation residuals", checks, elapsed, 30.0, {1e-8, 1e-6})


def test_criterion_07_moments(acceptance_log):
    checks, elapsed = _run("moments")
    _report(acceptance_log, 7, "simulated mean and variance of N(2)", checks, elapsed, 10.0, {3.0})


def test_criterion_08_elementary(acceptance_log):
    checks, elapsed = _run("elementary")
    _report(acceptance_log, 8, "elementary renewal limits", checks, elapsed, 1.0, {1e-3, 0.02})


def test_criterion_09_blackwell(acceptance_log):
    checks, elapsed = _run("blackwell")
    _report(acceptance_log, 9, "Blackwell-type limits", checks, elapsed, 1.0, {0.01, 0.10, 0.02, 1.0})


def test_criterion_10_limit_law(acceptance_log):
    checks, elapsed = _run("limit-law")
    _report(acceptance_log, 10, "limit law of Gbar(t) N(t)", checks, elapsed, 90.0, {0.05, 0.20, 0.02})


def test_criterion_11_sn_scaling(acceptance_log):
    checks, elapsed = _run("sn-scaling")
    _report(acceptance_log, 11, "S_n / U(n) scaling", checks, elapsed, 60.0, {0.05, 0.0})


def test_criterion_12_pgf(acceptance_log):
    checks, elapsed = _run("pgf")
    assert len({c.name.split("[")[0] for c in checks}) == 8
    _report(acceptance_log, 12, "pgf, pmf and moment coherence", checks, elapsed, 5.0, {1e-9})
