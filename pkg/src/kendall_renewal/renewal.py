"""Exact law of the Kendall renewal counting process.

With ``G``, ``Gbar = 1 - G``, ``F`` and ``u = t**-alpha H`` evaluated at the
level ``t``::

    R(t)   = G / Gbar + u / Gbar**2
    E N^2  = (u (1 + 3G) + G Gbar (1 + G)) / Gbar**3
    P{N=0} = 1 - F,   P{N=n} = G**(n-1) (n u Gbar + G (1 - F))
    E z^N  = 1 + (z - 1)(F - z G**2) / (1 - z G)**2

``Gbar`` is computed as ``(1 - F) + u`` rather than ``1 - G`` so that large
levels, where ``G`` is within rounding of 1, keep full relative precision.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError
from .kernels import kendall_convolve_cdf
from .measures import CDFMeasure
from .quadrature import integrate_piecewise
from .williamson import moment_H, williamson_G


@dataclass(frozen=True)
class _Parts:
    G: float
    Gbar: float
    F: float
    Fbar: float
    u: float


def _parts(dist, alpha, t, method="auto"):
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    G = williamson_G(dist, alpha, t, method)
    H = moment_H(dist, alpha, t, method)
    u = t**-alpha * H
    Fbar = float(dist.sf(t))
    Gbar = Fbar + u
    if not Gbar > 0:
        raise DivergenceError(f"G({t}) = 1: the renewal function is infinite")
    return _Parts(G=G, Gbar=Gbar, F=1.0 - Fbar, Fbar=Fbar, u=u)


@dataclass(frozen=True)
class RenewalEval:
    t: float
    R: float
    EN2: float
    VarN: float


def renewal_R(dist, alpha, t, method="auto"):
    p = _parts(dist, alpha, t, method)
    return p.G / p.Gbar + p.u / p.Gbar**2


def moments_N(dist, alpha, t, method="auto"):
    p = _parts(dist, alpha, t, method)
    R = p.G / p.Gbar + p.u / p.Gbar**2
    EN2 = (p.u * (1 + 3 * p.G) + p.G * p.Gbar * (1 + p.G)) / p.Gbar**3
    return RenewalEval(t=t, R=R, EN2=EN2, VarN=variance_N(dist, alpha, t, method))


def variance_N(dist, alpha, t, method="auto", form="partial-moment"):
    """``Var N(t)``.

    ``form="partial-moment"`` writes the variance with ``t**-alpha H``;
    ``form="cdf"`` substitutes ``F - G`` for it. The two agree because
    F = G + t**-alpha H; both are kept so that agreement can be checked.
    """
    p = _parts(dist, alpha, t, method)
    if form == "partial-moment":
        u = p.u
    elif form == "cdf":
        u = p.F - p.G
    else:
        raise ParameterError(f"unknown variance form {form!r}")
    return u * (1 + p.G) / p.Gbar**3 + p.G / p.Gbar**2 - u**2 / p.Gbar**4


def renewal_grid(dist, alpha, grid):
    return [moments_N(dist, alpha, float(t)) for t in grid]


def pmf_N(dist, alpha, t, n):
    if n < 0 or int(n) != n:
        raise ParameterError(f"n must be a nonnegative integer, got {n}")
    p = _parts(dist, alpha, t)
    if n == 0:
        return p.Fbar
    return p.G ** (n - 1) * (n * p.u * p.Gbar + p.G * p.Fbar)


def pgf_N(dist, alpha, t, z):
    if not 0.0 <= z <= 1.0:
        raise ParameterError(f"z must lie in [0, 1], got {z}")
    p = _parts(dist, alpha, t)
    if z * p.G >= 1.0:
        raise ParameterError(f"pgf pole: z * G(t) = {z * p.G} >= 1")
    return 1.0 + (z - 1.0) * (p.F - z * p.G**2) / (1.0 - z * p.G) ** 2


def pgf_coefficients(dist, alpha, t, nmax):
    """Taylor coefficients ``[z**0, ..., z**nmax]`` of the pgf, by series algebra.

    ``(1 - zG)**-2 = sum (k+1) G**k z**k``; multiply by ``F - G**2 z`` and by
    ``z - 1``, then add 1. Independent of the pmf formula.
    """
    p = _parts(dist, alpha, t)
    k = np.arange(nmax + 2)
    inv_sq = (k + 1) * p.G**k
    a = p.F * inv_sq
    a[1:] -= p.G**2 * inv_sq[:-1]
    coeffs = np.zeros(nmax + 1)
    coeffs[0] = 1.0 - a[0]
    coeffs[1:] = a[:-2] - a[1:-1]
    return coeffs


def _series_length(G, u, tol):
    """Smallest ``n`` with sum_{k>n} G**(k-1) (k u + G) < tol."""
    if G <= 0:
        return 1

    def tail(n):
        gn = G**n
        return gn * G / (1 - G) + u * ((n + 1) * gn - n * gn * G) / (1 - G) ** 2

    hi = 1
    while tail(hi) >= tol:
        hi *= 2
        if hi > 2**40:
            raise DivergenceError(f"series for R does not reach tolerance {tol} (G={G})")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail(mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def _Fn_terms(dist, alpha, t, tol):
    p = _parts(dist, alpha, t)
    G, u = p.G, p.u
    if u == 0.0 and G == 0.0:
        return np.arange(1, 1), np.zeros(0)
    n_terms = _series_length(G, u, tol)
    n = np.arange(1, n_terms + 1)
    if G == 0.0:
        powers = (n == 1).astype(float)
    else:
        # G**(n-1) through the accurately computed 1 - G: rounding G itself
        # would cost about R / Gbar ulps when G is close to 1.
        log_G = math.log1p(-p.Gbar) if G > 0.5 else math.log(G)
        powers = np.exp((n - 1) * log_G)
    return n, powers * (n * u + G)


def series_R(dist, alpha, t, tol=1e-12):
    """``sum_n F_n(t)`` truncated once the remaining tail is below ``tol / 4``.

    Terms are added with :func:`math.fsum` so rounding stays far below ``tol``.
    """
    _, terms = _Fn_terms(dist, alpha, t, tol / 4)
    return math.fsum(terms)


def series_EN2(dist, alpha, t, tol=1e-12):
    """``2 sum n F_n - sum F_n``."""
    n, terms = _Fn_terms(dist, alpha, t, tol / 64)
    return 2.0 * math.fsum(n * terms) - math.fsum(terms)


def pmf_sums(dist, alpha, t, tol=1e-13):
    """``(sum pmf, sum n pmf)`` over ``n`` up to the geometric tail cut-off."""
    p = _parts(dist, alpha, t)
    if p.G <= 0:
        n_max = 1
    else:
        n_max = _series_length(p.G, p.u, tol)
    n = np.arange(1, n_max + 2)
    probs = p.G ** (n - 1) * (n * p.u * p.Gbar + p.G * p.Fbar)
    return math.fsum([p.Fbar, *probs]), math.fsum(n * probs)


def renewal_R_prime(dist, alpha, t, rel_step=1e-5):
    """``R'(t)``; exact through the density when there is one.

    ``R' = t**alpha f / (t**alpha Gbar**2) + 2 alpha H**2 / (t**(2 alpha + 1) Gbar**3)``
    """
    if dist.has_density and not dist.atoms:
        p = _parts(dist, alpha, t)
        H = p.u * t**alpha
        f = float(dist.pdf(t))
        return f / p.Gbar**2 + 2 * alpha * H**2 / (t ** (2 * alpha + 1) * p.Gbar**3)
    h = rel_step * t
    return (renewal_R(dist, alpha, t + h) - renewal_R(dist, alpha, t - h)) / (2 * h)


def renewal_measure(dist, alpha):
    """The renewal measure ``m`` as a :class:`CDFMeasure` with CDF ``R``."""
    lo = dist.infimum()

    def cdf(x):
        if x <= 0 or x < lo:
            return 0.0
        if math.isinf(x):
            return math.inf
        return renewal_R(dist, alpha, x)

    return CDFMeasure(cdf, dist.breakpoints, name=f"renewal({dist.name})")


def renewal_transform(dist, alpha, s, quadrature=None):
    """``int (1 - (s x)**alpha)_+ dR(x)`` by quadrature against ``R``.

    Substituting ``x = v**(1/alpha) / s`` gives ``int_0^1 R(v**(1/alpha) / s) dv``.
    """
    if not s > 0:
        raise ParameterError(f"transform argument must be positive, got {s}")
    m = renewal_measure(dist, alpha)
    points = [(b * s) ** alpha for b in dist.breakpoints if 0 < b * s < 1]
    value, _ = integrate_piecewise(lambda v: m.cdf(v ** (1.0 / alpha) / s), 0.0, 1.0, points, quadrature)
    return value


@dataclass(frozen=True)
class FredholmResidual:
    transform: float
    measure: float


def fredholm_residual(dist, alpha, grid, quadrature=None):
    """Sup residuals of the renewal equation ``m = nu + nu <> m`` over levels ``grid``.

    Transform side: at kernel argument ``s = 1/t``, ``|Phi_m(s) - G/(1 - G)|``
    with ``Phi_m`` integrated against ``R`` and ``G = Phi_nu(s)``.
    Measure side: ``|R(t) - F(t) - (nu <> m)(0, t]|`` with the convolution
    evaluated by :func:`kendall_convolve_cdf`.
    """
    grid = np.asarray(grid, dtype=float)
    m = renewal_measure(dist, alpha)
    transform_res = 0.0
    for t in grid:
        G = williamson_G(dist, alpha, t)
        Gbar = float(dist.sf(t)) + t**-alpha * moment_H(dist, alpha, t)
        phi_m = renewal_transform(dist, alpha, 1.0 / t, quadrature)
        transform_res = max(transform_res, abs(phi_m - G / Gbar))
    conv = kendall_convolve_cdf(dist, m, alpha, grid, quadrature)
    measure_res = 0.0
    for t, c in zip(grid, conv):
        measure_res = max(measure_res, abs(m.cdf(t) - float(dist.cdf(t)) - c))
    return FredholmResidual(transform=transform_res, measure=measure_res)
