"""Catalog of unit-step distributions with their Williamson data.

Every entry exposes its CDF, survival function, density (when it has one),
quantile function, and whichever closed forms of ``G``, ``H``, ``m(alpha)``
and the renewal function are known. Closed forms depend on the walk index
``alpha``; laws whose shape is tied to a particular index (``pareto2alpha``,
``lackmem``, ``kendall_stable``) take that index as a constructor parameter
and only report the renewal closed form when the two agree.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import CatalogLookupError, DegenerateConditionError, ParameterError
from .measures import StepDistribution
from .quadrature import integrate_piecewise
from .rng import PathStreams
from .walk import pareto_2alpha


def _positive(name, value):
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise ParameterError(f"{name} must be a positive finite number, got {value}")
    return value


def _array_out(x):
    return float(x) if np.ndim(x) == 0 else x


class Dirac1(StepDistribution):
    name = "dirac1"
    atoms = ((1.0, 1.0),)
    support = (1.0, 1.0)
    breakpoints = (1.0,)

    def cdf(self, x):
        return _array_out(np.where(np.asarray(x, dtype=float) >= 1.0, 1.0, 0.0))

    def sf(self, x):
        return _array_out(np.where(np.asarray(x, dtype=float) >= 1.0, 0.0, 1.0))

    def quantile(self, u):
        return np.ones_like(np.asarray(u, dtype=float))

    def G_exact(self, t, alpha):
        return max(1.0 - t**-alpha, 0.0)

    def H_exact(self, t, alpha):
        return 1.0 if t >= 1.0 else 0.0

    def m_exact(self, alpha):
        return 1.0

    def R_exact(self, t, alpha):
        return 2.0 * t**alpha - 1.0 if t >= 1.0 else 0.0

    def theta(self, alpha):
        return 0.0


class Uniform01(StepDistribution):
    name = "uniform01"
    has_density = True
    support = (0.0, 1.0)
    breakpoints = (1.0,)

    def cdf(self, x):
        return _array_out(np.clip(np.asarray(x, dtype=float), 0.0, 1.0))

    def sf(self, x):
        return _array_out(1.0 - np.clip(np.asarray(x, dtype=float), 0.0, 1.0))

    def pdf(self, x):
        if np.ndim(x) == 0:
            return 1.0 if 0.0 <= x <= 1.0 else 0.0
        x = np.asarray(x, dtype=float)
        return _array_out(np.where((x >= 0.0) & (x <= 1.0), 1.0, 0.0))

    def quantile(self, u):
        return np.asarray(u, dtype=float)

    def G_exact(self, t, alpha):
        s = min(t, 1.0)
        return s - s ** (alpha + 1) / ((alpha + 1) * t**alpha)

    def H_exact(self, t, alpha):
        return min(t, 1.0) ** (alpha + 1) / (alpha + 1)

    def m_exact(self, alpha):
        return 1.0 / (alpha + 1)

    def R_exact(self, t, alpha):
        if t <= 1.0:
            return t * ((alpha + 1) ** 2 - alpha**2 * t) / (alpha + 1 - alpha * t) ** 2
        return 2.0 * (alpha + 1) * t**alpha - 1.0

    def theta(self, alpha):
        return 0.0


class Pareto(StepDistribution):
    """Pareto law with density ``beta * x**(-beta - 1)`` on ``[1, inf)``."""

    name = "pareto"
    has_density = True
    support = (1.0, math.inf)
    breakpoints = (1.0,)

    def __init__(self, beta):
        super().__init__(beta=beta)
        self.beta = _positive("beta", beta)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return _array_out(np.where(x >= 1.0, -np.expm1(-self.beta * np.log(np.maximum(x, 1.0))), 0.0))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _array_out(np.where(x >= 1.0, np.maximum(x, 1.0) ** -self.beta, 1.0))

    def pdf(self, x):
        if np.ndim(x) == 0:
            return self.beta * float(x) ** (-self.beta - 1) if x >= 1.0 else 0.0
        x = np.asarray(x, dtype=float)
        return _array_out(np.where(x >= 1.0, self.beta * np.maximum(x, 1.0) ** (-self.beta - 1), 0.0))

    def quantile(self, u):
        return np.exp(-np.log1p(-np.asarray(u, dtype=float)) / self.beta)

    def H_exact(self, t, alpha):
        if t <= 1.0:
            return 0.0
        d = alpha - self.beta
        if d == 0.0:
            return self.beta * math.log(t)
        return self.beta * math.expm1(d * math.log(t)) / d

    def G_exact(self, t, alpha):
        if t <= 1.0:
            return 0.0
        return self.cdf(t) - t**-alpha * self.H_exact(t, alpha)

    def m_exact(self, alpha):
        return self.beta / (self.beta - alpha) if self.beta > alpha else math.inf

    def theta(self, alpha):
        return max(alpha - self.beta, 0.0)


class Pareto2Alpha(Pareto):
    """``pi_{2a}``: the law of ``delta_1`` Kendall-convolved with itself at index ``a``."""

    name = "pareto2alpha"

    def __init__(self, alpha):
        self.shape_alpha = _positive("alpha", alpha)
        super().__init__(beta=2.0 * self.shape_alpha)
        self.params = {"alpha": self.shape_alpha}

    def R_exact(self, t, alpha):
        if alpha != self.shape_alpha:
            return None
        if t <= 1.0:
            return 0.0
        s = t**alpha
        return (s - 1.0) * (1.0 - 3.0 * s + 4.0 * s * s) / (2.0 * s - 1.0) ** 2


class LackOfMemory(StepDistribution):
    """CDF ``min(x**a, 1)``: lack of memory for the Kendall convolution of index ``a``."""

    name = "lackmem"
    has_density = True
    support = (0.0, 1.0)
    breakpoints = (1.0,)

    def __init__(self, alpha):
        super().__init__(alpha=alpha)
        self.a = _positive("alpha", alpha)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return _array_out(x**self.a)

    def sf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return _array_out(1.0 - x**self.a)

    def pdf(self, x):
        if np.ndim(x) == 0:
            return self.a * float(x) ** (self.a - 1.0) if 0.0 < x <= 1.0 else 0.0
        x = np.asarray(x, dtype=float)
        inside = (x > 0.0) & (x <= 1.0)
        safe = np.where(inside, x, 1.0)
        return _array_out(np.where(inside, self.a * safe ** (self.a - 1.0), 0.0))

    def quantile(self, u):
        return np.asarray(u, dtype=float) ** (1.0 / self.a)

    def H_exact(self, t, alpha):
        return self.a * min(t, 1.0) ** (alpha + self.a) / (alpha + self.a)

    def G_exact(self, t, alpha):
        return min(t, 1.0) ** self.a - t**-alpha * self.H_exact(t, alpha)

    def m_exact(self, alpha):
        return self.a / (alpha + self.a)

    def R_exact(self, t, alpha):
        if alpha != self.a:
            return None
        s = t**alpha
        if t <= 1.0:
            return (4.0 / s - 1.0) / (2.0 / s - 1.0) ** 2
        return 4.0 * s - 1.0

    def theta(self, alpha):
        return 0.0


class KendallStable(StepDistribution):
    """Step law whose Williamson transform of index ``a`` is ``exp(-t**a)``.

    Density ``a x**(-2a-1) exp(-x**-a)``, so ``X**-a`` is Gamma(2, 1) and
    ``F(x) = (1 + x**-a) exp(-x**-a)``.
    """

    name = "kendall_stable"
    has_density = True
    support = (0.0, math.inf)

    def __init__(self, alpha):
        super().__init__(alpha=alpha)
        self.a = _positive("alpha", alpha)
        self.breakpoints = (1.0,)

    def _y(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(x > 0.0, np.maximum(x, 1e-300) ** -self.a, np.inf)

    def cdf(self, x):
        return _array_out(special.gammaincc(2.0, self._y(x)))

    def sf(self, x):
        return _array_out(special.gammainc(2.0, self._y(x)))

    def pdf(self, x):
        if np.ndim(x) == 0:
            # scalar path for quadrature callers
            x = float(x)
            if x <= 0.0:
                return 0.0
            y = x**-self.a
            return self.a * y * y * math.exp(-y) / x if y < 800.0 else 0.0
        x = np.asarray(x, dtype=float)
        y = self._y(x)
        # Density underflows long before y*y overflows; cut at y = 800.
        live = (x > 0.0) & (y < 800.0)
        safe_x = np.where(live, x, 1.0)
        safe_y = np.where(live, y, 1.0)
        return _array_out(np.where(live, self.a * safe_y * safe_y * np.exp(-safe_y) / safe_x, 0.0))

    def quantile(self, u):
        return special.gammainccinv(2.0, np.asarray(u, dtype=float)) ** (-1.0 / self.a)

    def H_exact(self, t, alpha):
        s = 2.0 - alpha / self.a
        if s <= 0.0:
            return None
        y = t**-self.a
        return float(special.gamma(s) * special.gammaincc(s, y))

    def G_exact(self, t, alpha):
        if alpha == self.a:
            return math.exp(-(t**-alpha))
        h = self.H_exact(t, alpha)
        return None if h is None else self.cdf(t) - t**-alpha * h

    def m_exact(self, alpha):
        s = 2.0 - alpha / self.a
        return float(special.gamma(s)) if s > 0.0 else math.inf

    def R_exact(self, t, alpha):
        if alpha != self.a:
            return None
        u = t**-alpha
        # (e^u - 1 + u e^u) / (e^u - 1)^2, scaled by e^-2u so large u cannot overflow
        e = math.exp(-u)
        return e * (-math.expm1(-u) + u) / math.expm1(-u) ** 2

    def theta(self, alpha):
        return max(alpha - 2.0 * self.a, 0.0)


class HalfCauchy(StepDistribution):
    """Density ``2 / (pi (1 + x**2))`` on ``[0, inf)``; tail behaves like Pareto(1)."""

    name = "cauchy_onesided"
    has_density = True
    support = (0.0, math.inf)
    breakpoints = (1.0,)
    tail_constant = 2.0 / math.pi

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return _array_out(2.0 / math.pi * np.arctan(x))

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        with np.errstate(divide="ignore"):
            return _array_out(np.where(x > 0.0, 2.0 / math.pi * np.arctan(1.0 / np.maximum(x, 1e-300)), 1.0))

    def pdf(self, x):
        if np.ndim(x) == 0:
            return 2.0 / (math.pi * (1.0 + float(x) ** 2)) if x >= 0.0 else 0.0
        x = np.asarray(x, dtype=float)
        return _array_out(np.where(x >= 0.0, 2.0 / (math.pi * (1.0 + x * x)), 0.0))

    def quantile(self, u):
        return np.tan(0.5 * math.pi * np.asarray(u, dtype=float))

    def H_exact(self, t, alpha):
        if alpha == 1.0:
            return math.log1p(t * t) / math.pi
        if alpha == 2.0:
            return 2.0 / math.pi * (t - math.atan(t))
        return None

    def G_exact(self, t, alpha):
        h = self.H_exact(t, alpha)
        return None if h is None else self.cdf(t) - t**-alpha * h

    def m_exact(self, alpha):
        return 1.0 / math.cos(0.5 * math.pi * alpha) if alpha < 1.0 else math.inf

    def theta(self, alpha):
        return max(alpha - 1.0, 0.0)


class StudentLike(StepDistribution):
    """One-sided Student t with ``beta`` degrees of freedom (law of ``|T|``).

    Tail ``f(x) ~ c(beta) x**(-beta-1)``; only this tail enters the
    regular-variation asymptotics.
    """

    name = "student_like"
    has_density = True
    support = (0.0, math.inf)
    breakpoints = (1.0,)

    def __init__(self, beta):
        super().__init__(beta=beta)
        self.beta = b = _positive("beta", beta)
        self._log_norm = (
            math.log(2.0)
            + special.gammaln((b + 1) / 2)
            - special.gammaln(b / 2)
            - 0.5 * math.log(b * math.pi)
        )
        self.tail_constant = math.exp(self._log_norm + 0.5 * (b + 1) * math.log(b))

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return _array_out(1.0 - 2.0 * special.stdtr(self.beta, -x))

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return _array_out(2.0 * special.stdtr(self.beta, -x))

    def pdf(self, x):
        b = self.beta
        if np.ndim(x) == 0:
            x = float(x)
            return math.exp(self._log_norm - 0.5 * (b + 1) * math.log1p(x * x / b)) if x >= 0.0 else 0.0
        x = np.asarray(x, dtype=float)
        dens = np.exp(self._log_norm - 0.5 * (b + 1) * np.log1p(x * x / b))
        return _array_out(np.where(x >= 0.0, dens, 0.0))

    def quantile(self, u):
        return -special.stdtrit(self.beta, 0.5 * (1.0 - np.asarray(u, dtype=float)))

    def m_exact(self, alpha):
        b = self.beta
        if alpha >= b:
            return math.inf
        log_m = (
            0.5 * alpha * math.log(b)
            + special.gammaln((alpha + 1) / 2)
            + special.gammaln((b - alpha) / 2)
            - 0.5 * math.log(math.pi)
            - special.gammaln(b / 2)
        )
        return math.exp(log_m)

    def theta(self, alpha):
        return max(alpha - self.beta, 0.0)


# name -> (constructor, parameter schema); "alpha" means the walk index is
# used when the parameter is not given explicitly.
CATALOG = {
    "dirac1": (lambda **kw: Dirac1(), ()),
    "uniform01": (lambda **kw: Uniform01(), ()),
    "pareto2alpha": (lambda alpha, **kw: Pareto2Alpha(alpha), ("alpha",)),
    "lackmem": (lambda alpha, **kw: LackOfMemory(alpha), ("alpha",)),
    "kendall_stable": (lambda alpha, **kw: KendallStable(alpha), ("alpha",)),
    "pareto": (lambda beta, **kw: Pareto(beta), ("beta",)),
    "cauchy_onesided": (lambda **kw: HalfCauchy(), ()),
    "student_like": (lambda beta, **kw: StudentLike(beta), ("beta",)),
}

# Laws with worked renewal closed forms.
CLOSED_FORM_LAWS = ("dirac1", "uniform01", "pareto2alpha", "lackmem", "kendall_stable")


def catalog_lookup(name, alpha=None, **params):
    """Build a catalog step law.

    ``alpha`` is the walk index; the ``alpha``-shaped laws use it as their
    shape parameter. Other parameters (``beta``) are passed by keyword.
    """
    try:
        factory, schema = CATALOG[name]
    except KeyError:
        raise CatalogLookupError(
            f"unknown distribution {name!r}; choose from {', '.join(CATALOG)}"
        ) from None
    kwargs = {}
    for key in schema:
        value = alpha if key == "alpha" else params.get(key)
        if value is None:
            raise ParameterError(f"{name} requires parameter {key!r}")
        kwargs[key] = value
    unknown = set(params) - set(schema)
    if unknown:
        raise ParameterError(f"{name} does not take parameters {sorted(unknown)}")
    try:
        dist = factory(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name}: {exc}") from None
    dist._check_atoms()
    return dist


def sample(dist, u):
    return dist.sample(u)


@dataclass(frozen=True)
class LackOfMemoryResult:
    empirical: float
    target: float
    standard_error: float
    exact: float


def conditional_exceedance(dist, alpha, x, y, quadrature=None):
    """``P{X > x <> y | X > x}`` by direct integration over the law of ``x <> y``.

    ``x <> y`` equals ``M = max(x, y)`` with probability ``1 - rho`` and
    ``M * theta`` otherwise, ``rho = (min/M)**alpha``, ``theta ~ Pareto(2 alpha)``.
    """
    tail_x = float(dist.sf(x))
    if tail_x <= 0.0:
        raise DegenerateConditionError(f"P{{X > {x}}} = 0 for {dist.name}")
    big, small = max(x, y), min(x, y)
    rho = (small / big) ** alpha
    jump, _ = integrate_piecewise(
        lambda th: float(dist.sf(big * th)) * 2 * alpha * th ** (-2 * alpha - 1),
        1.0,
        math.inf,
        [b / big for b in dist.breakpoints],
        quadrature,
    )
    return ((1.0 - rho) * float(dist.sf(big)) + rho * jump) / tail_x


def lack_of_memory_check(dist, alpha, x, y, n_sims, seed):
    """Monte Carlo estimate of ``P{X > x <> y | X > x}`` paired with ``1 - F(y)``.

    Simulation ``i`` uses substream ``i`` of ``seed``: draw 0 for ``X``, draws
    1 and 2 for the branch choice and the Pareto factor of ``x <> y``.
    """
    if not (x > 0 and y > 0):
        raise ParameterError("x and y must be positive")
    if float(dist.sf(x)) <= 0.0:
        raise DegenerateConditionError(f"P{{X > {x}}} = 0 for {dist.name}")
    streams = PathStreams(seed)
    keys = streams.path_keys(np.arange(n_sims))
    sample_x = dist.quantile(streams.uniforms(keys, 0))
    big, small = max(x, y), min(x, y)
    rho = (small / big) ** alpha
    theta = pareto_2alpha(streams.uniforms(keys, 2), alpha)
    z = np.where(streams.uniforms(keys, 1) <= rho, big * theta, big)
    conditioned = sample_x > x
    hits = np.count_nonzero(sample_x[conditioned] > z[conditioned])
    m = np.count_nonzero(conditioned)
    if m == 0:
        raise DegenerateConditionError(f"no simulated X exceeded {x}")
    p = hits / m
    return LackOfMemoryResult(
        empirical=p,
        target=1.0 - float(dist.cdf(y)),
        standard_error=math.sqrt(p * (1 - p) / m),
        exact=conditional_exceedance(dist, alpha, x, y),
    )
