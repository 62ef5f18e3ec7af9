"""Measures on the half line: step laws, mixtures, rescalings, bare CDFs.

A :class:`StepDistribution` is split into an atomic part (a finite list of
``(location, mass)`` pairs) and an absolutely continuous part given by a
density. Integrals against the measure sum the atoms exactly and integrate
the density numerically.
"""

import math

import numpy as np

from .errors import ParameterError
from .quadrature import integrate_piecewise


class StepDistribution:
    """Unit-step law on ``(0, inf)``.

    Subclasses fill in ``cdf``/``sf``/``quantile`` and either ``atoms``,
    ``pdf`` or both. The ``*_exact`` hooks return ``None`` when no closed
    form is known for the requested walk index ``alpha``; callers then fall
    back to quadrature.
    """

    name = "abstract"
    atoms = ()
    has_density = False
    # Interval carrying the density; atoms may sit outside it.
    support = (0.0, math.inf)
    # Places where the density or the CDF is not smooth.
    breakpoints = ()

    def __init__(self, **params):
        self.params = params

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

    def _check_atoms(self):
        for x, mass in self.atoms:
            if x <= 0 and mass > 0:
                raise ParameterError(f"{self.name}: atom at {x} (support must be (0, inf))")

    # distribution functions ------------------------------------------------
    def cdf(self, x):
        raise NotImplementedError

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def pdf(self, x):
        raise NotImplementedError(f"{self.name} has no density")

    def quantile(self, u):
        raise NotImplementedError

    def sample(self, u):
        """Inverse-CDF transform of uniforms ``u`` in ``(0, 1)``."""
        u = np.asarray(u, dtype=float)
        if np.any((u <= 0.0) | (u >= 1.0)):
            raise ParameterError("uniform input must lie strictly inside (0, 1)")
        out = self.quantile(u)
        return float(out) if out.ndim == 0 else out

    # closed forms ------------------------------------------------------------
    def G_exact(self, t, alpha):
        return None

    def H_exact(self, t, alpha):
        return None

    def m_exact(self, alpha):
        return None

    def R_exact(self, t, alpha):
        return None

    def theta(self, alpha):
        """Regular-variation index of the partial moment ``H``."""
        return None

    def infimum(self):
        """Left end of the support (atoms included)."""
        lo = self.support[0] if self.has_density else math.inf
        for x, mass in self.atoms:
            if mass > 0:
                lo = min(lo, x)
        return lo


class Mixture(StepDistribution):
    """``p * first + (1 - p) * second``."""

    name = "mixture"

    def __init__(self, p, first, second):
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"mixture weight {p} outside [0, 1]")
        super().__init__(p=p, first=first, second=second)
        self.p, self.first, self.second = p, first, second
        atoms = [(x, p * m) for x, m in first.atoms] + [(x, (1 - p) * m) for x, m in second.atoms]
        self.atoms = tuple((x, m) for x, m in atoms if m > 0)
        self.has_density = first.has_density or second.has_density
        lo = min(d.support[0] for d in (first, second) if d.has_density) if self.has_density else 0.0
        hi = max(d.support[1] for d in (first, second) if d.has_density) if self.has_density else 0.0
        self.support = (lo, hi)
        self.breakpoints = tuple(sorted(set(first.breakpoints) | set(second.breakpoints)))

    def cdf(self, x):
        return self.p * self.first.cdf(x) + (1 - self.p) * self.second.cdf(x)

    def sf(self, x):
        return self.p * self.first.sf(x) + (1 - self.p) * self.second.sf(x)

    def pdf(self, x):
        total = 0.0
        if self.first.has_density:
            total = total + self.p * self.first.pdf(x)
        if self.second.has_density:
            total = total + (1 - self.p) * self.second.pdf(x)
        return total

    def m_exact(self, alpha):
        m1, m2 = self.first.m_exact(alpha), self.second.m_exact(alpha)
        if m1 is None or m2 is None:
            return None
        return self.p * m1 + (1 - self.p) * m2


class Scaled(StepDistribution):
    """Law of ``a * X`` for ``X ~ base``."""

    name = "scaled"

    def __init__(self, base, a):
        if a <= 0:
            raise ParameterError(f"scale {a} must be positive")
        super().__init__(base=base, a=a)
        self.base, self.a = base, a
        self.atoms = tuple((a * x, m) for x, m in base.atoms)
        self.has_density = base.has_density
        self.support = (a * base.support[0], a * base.support[1])
        self.breakpoints = tuple(a * b for b in base.breakpoints)

    def cdf(self, x):
        return self.base.cdf(np.asarray(x, dtype=float) / self.a)

    def sf(self, x):
        return self.base.sf(np.asarray(x, dtype=float) / self.a)

    def pdf(self, x):
        return self.base.pdf(np.asarray(x, dtype=float) / self.a) / self.a

    def quantile(self, u):
        return self.a * self.base.quantile(u)

    def G_exact(self, t, alpha):
        return self.base.G_exact(t / self.a, alpha)

    def H_exact(self, t, alpha):
        h = self.base.H_exact(t / self.a, alpha)
        return None if h is None else self.a**alpha * h

    def m_exact(self, alpha):
        m = self.base.m_exact(alpha)
        return None if m is None else self.a**alpha * m


class CDFMeasure:
    """Nonnegative measure on ``(0, inf)`` known only through its CDF.

    Used for the renewal measure (CDF ``R``) and for convolution results.
    Integrals are taken by parts against the CDF, so atoms need no special
    treatment beyond listing their locations in ``breakpoints``.
    """

    def __init__(self, cdf, breakpoints=(), name="cdf-measure"):
        self._cdf = cdf
        self.breakpoints = tuple(breakpoints)
        self.name = name

    def cdf(self, x):
        return self._cdf(x)

    def __repr__(self):
        return f"CDFMeasure({self.name})"


def _density_points(measure, lo, hi):
    # Decade ladder keeps QUADPACK honest on long power-law stretches.
    points = list(measure.breakpoints)
    if math.isinf(hi) or hi > 10.0:
        top = 1e6 if math.isinf(hi) else hi
        k = 1
        while 10.0**k < top:
            points.append(10.0**k)
            k += 1
    return [p for p in points if lo < p < hi]


def numeric_alpha_moment(measure, alpha, t, quadrature=None):
    """``int_(0, t] x**alpha measure(dx)``: atoms exactly, density by quadrature."""
    value = sum(m * x**alpha for x, m in measure.atoms if x <= t)
    if measure.has_density:
        lo, hi = measure.support
        hi = min(hi, t)
        if hi > lo:
            part, _ = integrate_piecewise(
                lambda x: x**alpha * measure.pdf(x), lo, hi, _density_points(measure, lo, hi), quadrature
            )
            value += part
    return value


def numeric_williamson_G(measure, alpha, t, quadrature=None):
    """``int (1 - (x/t)**alpha)_+ measure(dx)``: atoms exactly, density by quadrature."""
    value = sum(m * (1.0 - (x / t) ** alpha) for x, m in measure.atoms if x < t)
    if measure.has_density:
        lo, hi = measure.support
        hi = min(hi, t)
        if hi > lo:
            part, _ = integrate_piecewise(
                lambda x: (1.0 - (x / t) ** alpha) * measure.pdf(x),
                lo,
                hi,
                _density_points(measure, lo, hi),
                quadrature,
            )
            value += part
    return value
