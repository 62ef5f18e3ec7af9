"""Generalized-convolution algebras through their probability kernels.

An algebra is identified by its kernel ``omega(t) = h(delta_t)``; the
generalized characteristic function of a measure is ``t -> int omega(t x) dnu(x)``.
Only the Kendall algebra is used for sampling and for convolving measures;
the other kernels serve transform-domain checks.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError
from .measures import CDFMeasure, numeric_alpha_moment
from .quadrature import integrate_piecewise


class Family(enum.Enum):
    STABLE = "stable"
    KENDALL = "kendall"
    KUCHARCZAK_URBANIK = "kucharczak_urbanik"
    KENDALL_TYPE = "kendall_type"
    KINGMAN = "kingman"


@dataclass(frozen=True)
class ConvolutionKernel:
    family: Family
    alpha: float = 1.0
    n: int = 1
    c: float = 0.0
    p: float = 2.0

    @property
    def monotonic(self):
        # delta_x (.) delta_y is supported in [|x - y|, x + y] for Kingman.
        return self.family is not Family.KINGMAN

    @property
    def compact(self):
        """True when ``omega`` vanishes on ``[1, inf)``."""
        return self.family in (Family.KENDALL, Family.KUCHARCZAK_URBANIK, Family.KENDALL_TYPE)

    def __post_init__(self):
        fam = self.family
        if fam in (Family.STABLE, Family.KENDALL, Family.KUCHARCZAK_URBANIK):
            if not self.alpha > 0:
                raise ParameterError(f"{fam.value} kernel needs alpha > 0, got {self.alpha}")
        if fam is Family.KUCHARCZAK_URBANIK and (int(self.n) != self.n or self.n < 1):
            raise ParameterError(f"Kucharczak-Urbanik kernel needs integer n >= 1, got {self.n}")
        if fam is Family.KENDALL_TYPE:
            if self.p < 2:
                raise ParameterError(f"Kendall-type kernel needs p >= 2, got {self.p}")
            if not self.c > 0:
                raise ParameterError(f"Kendall-type kernel needs c > 0, got {self.c}")
            _validate_on_grid(self)

    def omega(self, t):
        return kernel_omega(self, t)

    def omega_derivative(self, t):
        """``d omega / dt`` for ``t > 0`` (zero past a compact support)."""
        fam, a = self.family, self.alpha
        t = max(float(t), 1e-300)
        if fam is Family.STABLE:
            return -a * t ** (a - 1) * math.exp(-(t**a))
        if t >= 1.0:
            return 0.0
        if fam is Family.KENDALL:
            return -a * t ** (a - 1)
        if fam is Family.KUCHARCZAK_URBANIK:
            return -self.n * a * t ** (a - 1) * (1 - t**a) ** (self.n - 1)
        if fam is Family.KENDALL_TYPE:
            return -(self.c + 1) + self.c * self.p * t ** (self.p - 1)
        raise NotImplementedError("Kingman convolution kernels are not implemented")


def stable(alpha):
    return ConvolutionKernel(Family.STABLE, alpha=alpha)


def kendall(alpha):
    return ConvolutionKernel(Family.KENDALL, alpha=alpha)


def kucharczak_urbanik(alpha, n):
    return ConvolutionKernel(Family.KUCHARCZAK_URBANIK, alpha=alpha, n=n)


def kendall_type(c, p):
    return ConvolutionKernel(Family.KENDALL_TYPE, c=c, p=p)


def kingman(n):
    """Placeholder carrying the non-monotonic flag; its kernel is not evaluated."""
    return ConvolutionKernel(Family.KINGMAN, n=n)


def kernel_omega(kernel, t):
    if t < 0:
        raise ParameterError(f"kernel argument must be nonnegative, got {t}")
    fam, a = kernel.family, kernel.alpha
    if fam is Family.STABLE:
        return math.exp(-(t**a))
    if fam is Family.KENDALL:
        return max(1.0 - t**a, 0.0)
    if fam is Family.KUCHARCZAK_URBANIK:
        return max(1.0 - t**a, 0.0) ** kernel.n
    if fam is Family.KENDALL_TYPE:
        if t > 1.0:
            return 0.0
        return 1.0 - (kernel.c + 1.0) * t + kernel.c * t**kernel.p
    raise NotImplementedError("Kingman convolution kernels are not implemented")


def _validate_on_grid(kernel, points=1001):
    grid = np.linspace(0.0, 1.0, points)
    values = 1.0 - (kernel.c + 1.0) * grid + kernel.c * grid**kernel.p
    if np.any(values < -1e-12) or np.any(values > 1.0 + 1e-12) or np.any(np.diff(values) > 1e-12):
        raise ParameterError(
            f"phi_(c={kernel.c}, p={kernel.p}) is not a nonincreasing [0, 1]-valued kernel"
        )


def char_fn(measure, kernel, t, quadrature=None):
    """Generalized characteristic function ``int omega(t x) measure(dx)``.

    Step laws contribute their atoms exactly plus a density integral. A
    :class:`CDFMeasure` is integrated by parts,
    ``int C(x) * (-t omega'(t x)) dx``, which needs no atom bookkeeping.
    """
    if t < 0:
        raise ParameterError(f"argument must be nonnegative, got {t}")
    if t == 0:
        return _total_mass(measure)
    if isinstance(measure, CDFMeasure):
        return _char_fn_by_parts(measure, kernel, t, quadrature)
    value = sum(m * kernel_omega(kernel, t * x) for x, m in measure.atoms)
    if measure.has_density:
        lo, hi = measure.support
        if kernel.compact:
            hi = min(hi, 1.0 / t)
        points = [b for b in measure.breakpoints] + [1.0 / t]
        part, _ = integrate_piecewise(
            lambda x: kernel_omega(kernel, t * x) * measure.pdf(x), lo, hi, points, quadrature
        )
        value += part
    return value


def _total_mass(measure):
    if isinstance(measure, CDFMeasure):
        return float(measure.cdf(math.inf))
    return 1.0


def _char_fn_by_parts(measure, kernel, t, quadrature):
    # dC against omega(t x) = -int C d omega(t x); boundary terms vanish because
    # C(0) = 0 and omega(t x) C(x) -> 0 at the right end.
    hi = 1.0 / t if kernel.compact else math.inf
    if kernel.family is Family.KENDALL:
        # x = v**(1/alpha) / t turns the weight into Lebesgue measure on [0, 1].
        a = kernel.alpha
        points = [(b * t) ** a for b in measure.breakpoints if 0 < b * t < 1]
        value, _ = integrate_piecewise(
            lambda v: measure.cdf(v ** (1.0 / a) / t), 0.0, 1.0, points, quadrature
        )
        return value
    points = [b for b in measure.breakpoints] + [1.0 / t]
    value, _ = integrate_piecewise(
        lambda x: -t * kernel.omega_derivative(t * x) * measure.cdf(x), 0.0, hi, points, quadrature
    )
    return value


def fredholm_phi(phi_nu):
    """Transform of the renewal measure, ``phi / (1 - phi)``."""
    if phi_nu >= 1.0:
        raise DivergenceError(f"renewal transform diverges at characteristic value {phi_nu}")
    return phi_nu / (1.0 - phi_nu)


def kendall_pair_cdf(x, y, alpha, t, closed=False):
    """``(delta_x Kendall-convolved with delta_y)`` of ``(0, t)``.

    With ``closed=True`` the interval is ``(0, t]``, i.e. the right-continuous
    CDF, which picks up the atom of mass ``1 - (min/max)**alpha`` at ``max(x, y)``.
    """
    if x < 0 or y < 0 or not t > 0 or not alpha > 0:
        raise ParameterError("need x, y >= 0, t > 0 and alpha > 0")
    inside = (x <= t and y <= t) if closed else (x < t and y < t)
    if not inside:
        return 0.0
    return 1.0 - (x * y) ** alpha / t ** (2 * alpha)


def _as_measure(obj, breakpoints=()):
    if callable(obj) and not hasattr(obj, "cdf"):
        return CDFMeasure(obj, breakpoints)
    return obj


def partial_moment(measure, alpha, t, quadrature=None):
    """``int_(0, t] x**alpha measure(dx)`` for a step law or a CDF-only measure."""
    if not isinstance(measure, CDFMeasure):
        exact = measure.H_exact(t, alpha)
        return exact if exact is not None else numeric_alpha_moment(measure, alpha, t, quadrature)
    # By parts: t**alpha C(t) - int_0^t alpha x**(alpha-1) C(x) dx, and the
    # integral is t**alpha * int_0^1 C(t v**(1/alpha)) dv.
    points = [(b / t) ** alpha for b in measure.breakpoints if 0 < b < t]
    avg, _ = integrate_piecewise(
        lambda v: measure.cdf(t * v ** (1.0 / alpha)), 0.0, 1.0, points, quadrature
    )
    return t**alpha * (float(measure.cdf(t)) - avg)


def kendall_convolve_cdf(first, second, alpha, grid, quadrature=None):
    """CDF of ``first`` Kendall-convolved with ``second`` on ``grid``.

    The double Stieltjes integral of :func:`kendall_pair_cdf` (closed form)
    separates into ``C1(t) C2(t) - t**(-2 alpha) H1(t) H2(t)`` with
    ``H_i`` the partial ``alpha``-moments. Either argument may be a step law,
    a :class:`CDFMeasure` or a plain CDF callable.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    if np.any(grid <= 0):
        raise ParameterError("grid points must be positive")
    first, second = _as_measure(first), _as_measure(second)
    out = np.empty_like(grid)
    for i, t in enumerate(grid):
        c1, c2 = float(first.cdf(t)), float(second.cdf(t))
        if c1 == 0.0 or c2 == 0.0:
            out[i] = 0.0
            continue
        h1 = partial_moment(first, alpha, t, quadrature)
        h2 = partial_moment(second, alpha, t, quadrature)
        out[i] = c1 * c2 - h1 * h2 / t ** (2 * alpha)
    return out


def convolved_measure(first, second, alpha, quadrature=None):
    """Kendall convolution of two measures as a :class:`CDFMeasure`."""
    first, second = _as_measure(first), _as_measure(second)
    breaks = tuple(sorted(set(first.breakpoints) | set(second.breakpoints)))

    def cdf(t):
        if t <= 0:
            return 0.0
        if math.isinf(t):
            return float(first.cdf(t)) * float(second.cdf(t))
        return float(kendall_convolve_cdf(first, second, alpha, [t], quadrature)[0])

    return CDFMeasure(cdf, breaks, name=f"{getattr(first, 'name', '?')}*{getattr(second, 'name', '?')}")
