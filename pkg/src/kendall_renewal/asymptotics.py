"""Finite-level checks of the regular-variation limit theorems.

Every check returns an :class:`AsymptoticsReport` holding the finite-level
value, its limit and the relative error. All limits assume ``H`` regularly
varying with index ``theta < alpha``; the index comes from the step law
(``dist.theta(alpha)``) and laws outside that range are rejected.
"""

import math
from dataclasses import dataclass

import numpy as np

from .catalog import Pareto
from .diagnostics import ks_critical, ks_statistic
from .errors import OutOfScopeError, ParameterError
from .quadrature import integrate_piecewise
from .renewal import _parts, pmf_N, renewal_R, renewal_R_prime
from .walk import sample_endpoints, sample_stats, simulate_counts
from .williamson import Fn_cdf, m_alpha, moment_H, williamson_Gbar


@dataclass(frozen=True)
class AsymptoticsReport:
    quantity: str
    x: float
    finite: float
    limit: float
    rel_error: float


def _report(quantity, x, finite, limit):
    err = abs(finite - limit) / abs(limit) if limit != 0 else abs(finite)
    return AsymptoticsReport(quantity, float(x), float(finite), float(limit), float(err))


def _theta(dist, alpha):
    index = getattr(dist, "theta", None)
    theta = index(alpha) if index is not None else None
    if theta is None:
        raise OutOfScopeError(f"regular-variation index of {dist.name} is not known")
    if not theta < alpha:
        raise OutOfScopeError(f"theta = {theta} >= alpha = {alpha}: outside the limit theorems")
    return theta


def _finite_moment(dist, alpha):
    m = m_alpha(dist, alpha)
    if math.isinf(m):
        raise OutOfScopeError(f"m(alpha) is infinite for {dist.name} at alpha={alpha}")
    return m


def renewal_constant(alpha, theta):
    """``c = ((alpha - theta) / alpha)**2 (2 alpha - theta)``."""
    return ((alpha - theta) / alpha) ** 2 * (2 * alpha - theta)


def truncated_tail_moment(dist, alpha, x, quadrature=None):
    """``W(x) = int_0^x y**(alpha-1) (1 - F(y)) dy`` by quadrature."""
    points = [b for b in dist.breakpoints if 0 < b < x]
    value, _ = integrate_piecewise(
        lambda y: y ** (alpha - 1) * float(dist.sf(y)), 0.0, x, points, quadrature
    )
    return value


def tail_ratios(dist, alpha, x):
    """The three tail ratios ``x**a Fbar / H``, ``a W / H`` and ``x**a Gbar / H``.

    ``W`` is integrated independently of ``H``; by parts ``a W = H + x**a Fbar``.
    """
    theta = _theta(dist, alpha)
    H = moment_H(dist, alpha, x)
    xa = x**alpha
    Fbar = float(dist.sf(x))
    W = truncated_tail_moment(dist, alpha, x)
    Gbar = williamson_Gbar(dist, alpha, x)
    return [
        _report("tail_ratio", x, xa * Fbar / H, theta / (alpha - theta)),
        _report("integrated_tail_ratio", x, alpha * W / H, alpha / (alpha - theta)),
        _report("gbar_ratio", x, xa * Gbar / H, alpha / (alpha - theta)),
    ]


# name used by the published interface
lemma5_ratios = tail_ratios


def elementary_renewal(dist, alpha, x):
    """``x**-a R(x) H(x)`` against ``(a - theta)(2a - theta) / a**2``."""
    theta = _theta(dist, alpha)
    finite = x**-alpha * renewal_R(dist, alpha, x) * moment_H(dist, alpha, x)
    return _report("elementary_renewal", x, finite, (alpha - theta) * (2 * alpha - theta) / alpha**2)


def elementary_renewal_moment(dist, alpha, x):
    """``x**-a R(x)`` against ``2 / m(alpha)`` for finite ``m(alpha)``."""
    m = _finite_moment(dist, alpha)
    return _report("elementary_renewal_moment", x, x**-alpha * renewal_R(dist, alpha, x), 2.0 / m)


def blackwell_classic(dist, alpha, t, h):
    """``H(t) (R(t+h) - R(t)) / t**(a-1)`` against ``c h``."""
    theta = _theta(dist, alpha)
    if not h > 0:
        raise ParameterError(f"h must be positive, got {h}")
    dR = renewal_R(dist, alpha, t + h) - renewal_R(dist, alpha, t)
    finite = moment_H(dist, alpha, t) * dR / t ** (alpha - 1)
    return _report("blackwell_classic", t, finite, renewal_constant(alpha, theta) * h)


def _normalized_R(dist, alpha, t):
    return renewal_R(dist, alpha, t) / t ** (alpha - 1)


def normalized_R_derivative(dist, alpha, t):
    """``d/dt [R(t) t**(1-a)] = R' t**(1-a) + (1-a) R t**-a``."""
    return renewal_R_prime(dist, alpha, t) * t ** (1 - alpha) + (1 - alpha) * renewal_R(dist, alpha, t) * t**-alpha


def blackwell_normalized(dist, alpha, t, h):
    """``R(t+h)/(t+h)**(a-1) - R(t)/t**(a-1)`` against ``2h / m(alpha)``."""
    m = _finite_moment(dist, alpha)
    if not h > 0:
        raise ParameterError(f"h must be positive, got {h}")
    finite = _normalized_R(dist, alpha, t + h) - _normalized_R(dist, alpha, t)
    return _report("blackwell_normalized", t, finite, 2 * h / m)


def mean_value_bracket(dist, alpha, t, h, slack=1e-7):
    """Mean-value consistency of the normalized Blackwell difference.

    True when ``|finite - h d(t)| <= h |d(t+h) - d(t)|`` with ``d`` the
    derivative of ``R(t) t**(1-a)``; ``slack`` (relative) absorbs rounding.
    """
    finite = _normalized_R(dist, alpha, t + h) - _normalized_R(dist, alpha, t)
    d0 = normalized_R_derivative(dist, alpha, t)
    d1 = normalized_R_derivative(dist, alpha, t + h)
    return abs(finite - h * d0) <= h * abs(d1 - d0) + slack * abs(finite)


def blackwell_derivative(dist, alpha, t):
    """``H(t) R'(t) / t**(a-1)`` against ``c``."""
    theta = _theta(dist, alpha)
    finite = moment_H(dist, alpha, t) * renewal_R_prime(dist, alpha, t) / t ** (alpha - 1)
    return _report("blackwell_derivative", t, finite, renewal_constant(alpha, theta))


def pareto_renewal_reports(dist, alpha, x, h=1.0):
    """Explicit renewal asymptotics for a Pareto(beta) step law.

    ``beta > alpha``: ``x**-a R -> 2/m`` and ``x**(1-a) dR -> 2 a h / m``.
    ``beta = alpha``: ``a x**-a log(x) R -> 2`` and ``x**(1-a) log(x) dR -> 2h``.
    ``beta < alpha``: ``x**-b R -> (a-b)(a+b)/a**2`` and
    ``x**(1-b) dR -> theta b (a + theta) h / a**2``.
    """
    if not isinstance(dist, Pareto):
        raise OutOfScopeError(f"explicit Pareto asymptotics need a pareto step law, got {dist.name}")
    b = dist.beta
    R = renewal_R(dist, alpha, x)
    dR = renewal_R(dist, alpha, x + h) - R
    if b > alpha:
        m = dist.m_exact(alpha)
        return [
            _report("pareto_renewal", x, x**-alpha * R, 2 / m),
            _report("pareto_blackwell", x, x ** (1 - alpha) * dR, 2 * alpha * h / m),
        ]
    if b == alpha:
        log_x = math.log(x)
        return [
            _report("pareto_renewal", x, alpha * x**-alpha * log_x * R, 2.0),
            _report("pareto_blackwell", x, x ** (1 - alpha) * log_x * dR, 2 * h),
        ]
    theta = alpha - b
    return [
        _report("pareto_renewal", x, x**-b * R, (alpha - b) * (alpha + b) / alpha**2),
        _report("pareto_blackwell", x, x ** (1 - b) * dR, theta * b * (alpha + theta) * h / alpha**2),
    ]


def rv_index_estimate(H_eval, x, lam=2.0):
    """``log(H(lam x) / H(x)) / log(lam)``, a finite-level estimate of the RV index."""
    if not lam > 1:
        raise ParameterError(f"lambda must exceed 1, got {lam}")
    h0, h1 = H_eval(x), H_eval(lam * x)
    if not (h0 > 0 and h1 > 0):
        raise ParameterError(f"H must be positive at x and lambda x, got {h0}, {h1}")
    return math.log(h1 / h0) / math.log(lam)


@dataclass(frozen=True)
class MixtureGammaLaw:
    """``w Gamma(1, 1) + (1 - w) Gamma(2, 1)``."""

    w: float

    def __post_init__(self):
        if not 0.0 <= self.w < 1.0:
            raise ParameterError(f"weight must lie in [0, 1), got {self.w}")

    def cdf(self, x):
        return mixture_gamma_cdf(self.w, x)

    def mean(self):
        return self.w + 2 * (1 - self.w)

    def var(self):
        # E Z^2 = w * 2 + (1 - w) * 6
        return 2 * self.w + 6 * (1 - self.w) - self.mean() ** 2


def mixture_gamma_cdf(w, x):
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    # 1 - e^-x (1 + (1 - w) x), with expm1 for small x; x e^-x -> 0 at inf
    finite = np.where(np.isinf(x), 0.0, x)
    xe = finite * np.exp(-finite)
    out = -np.expm1(-x) - (1.0 - w) * xe
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LimitLawResult:
    mean: float
    var: float
    se_mean: float
    se_var: float
    ks: float
    ks_critical: float
    w: float
    gbar: float
    n_sims: int


def limit_law_sim(config, t, n_sims, workers=1):
    """Simulate ``Gbar(t) N(t)`` and compare with the Gamma mixture of weight ``theta / alpha``."""
    dist, alpha = config.step, config.alpha
    theta = _theta(dist, alpha)
    gbar = williamson_Gbar(dist, alpha, t)
    if not gbar < 0.1:
        raise ParameterError(f"t={t} is too small for the limit law (Gbar = {gbar:.3g} >= 0.1)")
    w = theta / alpha
    scaled = gbar * simulate_counts(config, t, n_sims, workers=workers)
    stats = sample_stats(scaled)
    ks = ks_statistic(scaled, lambda v: mixture_gamma_cdf(w, v))
    return LimitLawResult(
        stats.mean, stats.var, stats.se_mean, stats.se_var, ks, ks_critical(n_sims), w, gbar, n_sims
    )


def limit_law_exact_distance(dist, alpha, t, tol=1e-12):
    """Kolmogorov distance between the exact law of ``Gbar(t) N(t)`` and its limit."""
    theta = _theta(dist, alpha)
    p = _parts(dist, alpha, t)
    w = theta / alpha
    probs = [pmf_N(dist, alpha, t, 0)]
    total = probs[0]
    n = 0
    while 1.0 - total > tol and n < 10**7:
        n += 1
        probs.append(pmf_N(dist, alpha, t, n))
        total += probs[-1]
    cum = np.cumsum(probs)
    support = p.Gbar * np.arange(len(probs))
    target = mixture_gamma_cdf(w, support)
    before = np.concatenate(([0.0], cum[:-1]))
    return float(max(np.max(np.abs(cum - target)), np.max(np.abs(before - target))))


def _pareto_scaling(dist, alpha):
    if not isinstance(dist, Pareto):
        raise OutOfScopeError(f"S_n scaling is implemented for pareto step laws only, got {dist.name}")
    b = dist.beta
    if b > alpha:
        raise OutOfScopeError(f"S_n scaling needs beta <= alpha, got beta={b}, alpha={alpha}")
    theta = alpha - b if b < alpha else 0.0
    return b, theta


def sn_normalizer(dist, alpha, n):
    """``U(n)``: ``(a n / theta)**(1/b)`` for ``b < a`` and ``(n log n)**(1/a)`` for ``b = a``."""
    b, theta = _pareto_scaling(dist, alpha)
    if b < alpha:
        return (alpha * n / theta) ** (1.0 / b)
    return (n * math.log(n)) ** (1.0 / alpha)


def sn_target_cdf(dist, alpha, s):
    """``P{Z**(-1/(a-theta)) <= s} = P{Z >= s**-(a-theta)}``."""
    _, theta = _pareto_scaling(dist, alpha)
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        z = np.where(s > 0, np.power(np.maximum(s, 1e-300), -(alpha - theta)), np.inf)
    out = np.where(s > 0, 1.0 - mixture_gamma_cdf(theta / alpha, z), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ScalingResult:
    n: int
    normalizer: float
    scaled: np.ndarray
    ks: float
    ks_critical: float


def sn_scaling_sim(config, n, n_sims, workers=1):
    """Simulate ``S_n / U(n)`` and its KS distance to the limit ``Z**(-1/(a-theta))``."""
    dist, alpha = config.step, config.alpha
    U = sn_normalizer(dist, alpha, n)
    scaled = sample_endpoints(config, n, n_sims, workers=workers) / U
    ks = ks_statistic(scaled, lambda s: sn_target_cdf(dist, alpha, s))
    return ScalingResult(n, U, scaled, ks, ks_critical(n_sims))


def sn_scaling_exact_distance(dist, alpha, n, grid=None):
    """Sup over ``grid`` of ``|P{S_n <= U(n) s} - target(s)|`` from the exact ``F_n``."""
    U = sn_normalizer(dist, alpha, n)
    if grid is None:
        grid = np.geomspace(0.02, 50.0, 400)
    exact = np.array([Fn_cdf(dist, alpha, n, U * s) for s in grid])
    return float(np.max(np.abs(exact - sn_target_cdf(dist, alpha, grid))))
