"""Adaptive quadrature with explicit breakpoints.

The integrands in this package are piecewise smooth with kinks at known
places (kernel support cutoffs, atoms of a step law, the edge of a support
interval). Splitting there keeps QUADPACK in its comfortable regime.
"""

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import IntegrationError


@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-10
    epsrel: float = 1e-10
    limit: int = 400


DEFAULT_QUADRATURE = QuadratureConfig()


def _quad_piece(f, a, b, cfg):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, abserr = integrate.quad(
            f, a, b, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit
        )
    if not math.isfinite(value):
        raise IntegrationError(f"non-finite integral on [{a}, {b}]")
    tolerance = max(cfg.epsabs, cfg.epsrel * abs(value))
    if caught and abserr > 100 * tolerance:
        raise IntegrationError(
            f"quadrature on [{a}, {b}] did not converge: value={value!r}, "
            f"error estimate={abserr!r} ({caught[0].message})"
        )
    return value, abserr


def integrate_piecewise(f, a, b, points=(), config=None):
    """Integrate ``f`` over ``[a, b]`` (``b`` may be ``inf``), splitting at ``points``.

    Returns ``(value, error_estimate)``.
    """
    cfg = config or DEFAULT_QUADRATURE
    if b <= a:
        return 0.0, 0.0
    finite_b = b if math.isfinite(b) else None
    cuts = sorted({float(p) for p in points if a < p and (finite_b is None or p < finite_b)})
    edges = [a, *cuts]
    if finite_b is not None:
        edges.append(finite_b)
    total, err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _quad_piece(f, lo, hi, cfg)
        total += v
        err += e
    if finite_b is None:
        v, e = _quad_piece(f, edges[-1], math.inf, cfg)
        total += v
        err += e
    return total, err

