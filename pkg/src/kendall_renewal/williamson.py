"""Williamson transform of a step law and its inversion.

For a walk of index ``alpha`` and step law ``nu`` with CDF ``F``::

    G(t) = int (1 - (x/t)**alpha)_+ nu(dx)     (transform at 1/t)
    H(t) = int_(0, t] x**alpha nu(dx)          (partial alpha-moment)
    F(t) = G(t) + t**-alpha H(t)

and the n-fold Kendall convolution has CDF
``F_n = G**(n-1) * (n t**-alpha H + G)``.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError, PrecisionWarning
from .measures import numeric_alpha_moment, numeric_williamson_G
from .quadrature import integrate_piecewise

METHODS = ("auto", "analytic", "numeric")


def _check(alpha, t):
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")


def _pick(exact, numeric, method, what):
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}")
    if method == "numeric":
        return numeric()
    value = exact()
    if value is None:
        if method == "analytic":
            raise ParameterError(f"no closed form for {what}")
        return numeric()
    return value


def williamson_G(dist, alpha, t, method="auto", quadrature=None):
    _check(alpha, t)
    return _pick(
        lambda: dist.G_exact(t, alpha),
        lambda: numeric_williamson_G(dist, alpha, t, quadrature),
        method,
        f"G of {dist.name}",
    )


def moment_H(dist, alpha, t, method="auto", quadrature=None):
    _check(alpha, t)
    return _pick(
        lambda: dist.H_exact(t, alpha),
        lambda: numeric_alpha_moment(dist, alpha, t, quadrature),
        method,
        f"H of {dist.name}",
    )


def williamson_Gbar(dist, alpha, t, method="auto", quadrature=None):
    """``1 - G(t)``, computed as ``sf(t) + t**-alpha H(t)`` to avoid cancellation."""
    h = moment_H(dist, alpha, t, method, quadrature)
    return float(dist.sf(t)) + t**-alpha * h


def m_alpha(dist, alpha, quadrature=None):
    """``E T**alpha``; ``math.inf`` when the moment diverges."""
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    exact = dist.m_exact(alpha)
    if exact is not None:
        return exact
    value = sum(m * x**alpha for x, m in dist.atoms)
    if dist.has_density:
        lo, hi = dist.support
        part, _ = integrate_piecewise(
            lambda x: x**alpha * dist.pdf(x), lo, hi, dist.breakpoints, quadrature
        )
        value += part
    return value


@dataclass(frozen=True)
class WilliamsonPair:
    alpha: float
    G: Callable[[float], float]
    H: Optional[Callable[[float], float]] = None
    source: str = "analytic"


def williamson_pair(dist, alpha, method="auto", quadrature=None):
    source = "numeric-from-CDF" if method == "numeric" else "analytic"
    return WilliamsonPair(
        alpha=alpha,
        G=lambda t: williamson_G(dist, alpha, t, method, quadrature),
        H=lambda t: moment_H(dist, alpha, t, method, quadrature),
        source=source,
    )


def invert_williamson(pair, t, rel_step=1e-6):
    """Recover ``F(t)`` from the transform pair.

    Uses ``G + t**-alpha H`` when ``H`` is available, otherwise
    ``G + (t/alpha) G'`` with a central difference for ``G'``. The result is
    clamped to ``[0, 1]``.
    """
    alpha = pair.alpha
    _check(alpha, t)
    if pair.H is not None:
        value = pair.G(t) + t**-alpha * pair.H(t)
    else:
        step = rel_step * t
        if step <= 0 or t - step == t or t + step == t:
            warnings.warn(
                f"difference step {step!r} underflows at t={t!r}; derivative set to 0",
                PrecisionWarning,
                stacklevel=2,
            )
            derivative = 0.0
        else:
            derivative = (pair.G(t + step) - pair.G(t - step)) / (2 * step)
        value = pair.G(t) + t / alpha * derivative
    return min(max(value, 0.0), 1.0)


def Fn_from_GH(G, H, alpha, n, t):
    """Closed form for the n-fold convolution CDF given ``G(t)``, ``H(t)``."""
    if n < 1 or int(n) != n:
        raise ParameterError(f"n must be a positive integer, got {n}")
    u = t**-alpha * H
    value = G ** (n - 1) * (n * u + G)
    return min(max(value, 0.0), 1.0)


def Fn_cdf(dist, alpha, n, t, method="auto", quadrature=None):
    """CDF of the n-fold Kendall convolution of ``dist`` at ``t``."""
    _check(alpha, t)
    G = williamson_G(dist, alpha, t, method, quadrature)
    H = moment_H(dist, alpha, t, method, quadrature)
    return Fn_from_GH(G, H, alpha, n, t)


def Fn_cdf_many(dist, alpha, n, ts, method="auto", quadrature=None):
    """:func:`Fn_cdf` over an array of levels; each distinct level is evaluated once."""
    if n < 1 or int(n) != n:
        raise ParameterError(f"n must be a positive integer, got {n}")
    ts = np.asarray(ts, dtype=float)
    levels, inverse = np.unique(ts, return_inverse=True)
    if levels.size and not levels[0] > 0:
        raise ParameterError(f"t must be positive, got {levels[0]}")
    G = np.empty(levels.size)
    H = np.empty(levels.size)
    for i, t in enumerate(levels.tolist()):
        g = dist.G_exact(t, alpha) if method != "numeric" else None
        h = dist.H_exact(t, alpha) if method != "numeric" else None
        G[i] = g if g is not None else williamson_G(dist, alpha, t, method, quadrature)
        H[i] = h if h is not None else moment_H(dist, alpha, t, method, quadrature)
    values = np.clip(G ** (n - 1) * (n * levels**-alpha * H + G), 0.0, 1.0)
    return values[inverse].reshape(ts.shape)


def log_Fn(G, H, alpha, n, t):
    """``log F_n(t)``; usable for very large ``n`` where ``G**n`` underflows."""
    u = t**-alpha * H
    if n * u + G <= 0:
        return -math.inf
    if G <= 0:
        return -math.inf if n > 1 else math.log(u)
    return (n - 1) * math.log(G) + math.log(n * u + G)
