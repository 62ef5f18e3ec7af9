"""Monte Carlo simulation of the Kendall random walk.

The walk starts at ``S_0 = 0`` and moves by::

    M = max(S_n, T_{n+1}),  m = min(S_n, T_{n+1}),  rho = (m / M)**alpha
    S_{n+1} = M * theta  if U <= rho  else  M

with ``T`` the step law, ``U`` uniform and ``theta`` Pareto(2 alpha) on
``[1, inf)``. Since ``S_0 = 0`` gives ``rho = 0``, the first move is
``S_1 = T_1``.

Every path draws three uniforms per step (``T``, ``U``, ``theta``) from its
own substream (see :mod:`kendall_renewal.rng`), so results do not depend on
batching or on the number of worker threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, RunawayError
from .measures import StepDistribution
from .rng import PathStreams
from .williamson import Fn_cdf

DRAWS_PER_STEP = 3
CHUNK = 65536


@dataclass(frozen=True)
class WalkConfig:
    alpha: float
    step: StepDistribution
    seed: int
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if self.max_steps < 1:
            raise ParameterError(f"max_steps must be at least 1, got {self.max_steps}")
        PathStreams(self.seed)


@dataclass(frozen=True)
class WalkPath:
    values: tuple

    def __len__(self):
        return len(self.values)

    def is_nondecreasing(self):
        return all(b >= a for a, b in zip(self.values, self.values[1:]))


def pareto_2alpha(u, alpha):
    """Inverse CDF of the Pareto law with density ``2a y**(-2a-1)`` on ``[1, inf)``."""
    return np.power(1.0 - np.asarray(u, dtype=float), -1.0 / (2.0 * alpha))


def step(s_prev, t_next, u, theta, alpha):
    """One transition of the walk for scalar inputs."""
    if theta < 1:
        raise ParameterError(f"theta must be >= 1, got {theta}")
    if not 0.0 < u < 1.0:
        raise ParameterError(f"u must lie in (0, 1), got {u}")
    big, small = max(s_prev, t_next), min(s_prev, t_next)
    if big <= 0:
        raise ParameterError("degenerate state: previous position and step are both 0")
    rho = (small / big) ** alpha
    return big * theta if u <= rho else big


def _advance(s_prev, t_next, u, theta, alpha):
    big = np.maximum(s_prev, t_next)
    small = np.minimum(s_prev, t_next)
    rho = (small / big) ** alpha
    return np.where(u <= rho, big * theta, big)


def sample_pair_convolution(x, y, alpha, rng, size=None):
    """Draw(s) from ``delta_x`` Kendall-convolved with ``delta_y``.

    ``rng`` is a :class:`numpy.random.Generator`.
    """
    if x < 0 or y < 0:
        raise ParameterError("x and y must be nonnegative")
    big, small = max(x, y), min(x, y)
    if big == 0:
        return 0.0 if size is None else np.zeros(size)
    rho = (small / big) ** alpha
    u = rng.random(size)
    theta = pareto_2alpha(rng.random(size), alpha)
    out = np.where(u <= rho, big * theta, big)
    return float(out) if size is None else out


def _batches(n_items, workers):
    bounds = list(range(0, n_items, CHUNK)) + [n_items]
    spans = [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if workers <= 1 or len(spans) <= 1:
        return spans, None
    return spans, ThreadPoolExecutor(max_workers=workers)


def _map_batches(fn, n_items, workers):
    spans, pool = _batches(n_items, workers)
    if pool is None:
        parts = [fn(a, b) for a, b in spans]
    else:
        with pool:
            parts = list(pool.map(lambda ab: fn(*ab), spans))
    return parts


def _paths_block(config, streams, first, last, n, keep_path=True):
    keys = streams.path_keys(np.arange(first, last))
    out = np.empty((last - first, n)) if keep_path else None
    s = np.zeros(last - first)
    for k in range(n):
        base = DRAWS_PER_STEP * k
        t_next = config.step.quantile(streams.uniforms(keys, base))
        u = streams.uniforms(keys, base + 1)
        theta = pareto_2alpha(streams.uniforms(keys, base + 2), config.alpha)
        s = _advance(s, t_next, u, theta, config.alpha)
        if keep_path:
            out[:, k] = s
    return out if keep_path else s


def sample_paths(config, n, n_paths, first_path=0, workers=1):
    """Array of shape ``(n_paths, n)``; row ``i`` is path ``first_path + i``."""
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if n > config.max_steps:
        raise RunawayError(f"{n} steps requested but max_steps is {config.max_steps}")
    streams = PathStreams(config.seed)
    parts = _map_batches(
        lambda a, b: _paths_block(config, streams, first_path + a, first_path + b, n),
        n_paths,
        workers,
    )
    return np.concatenate(parts) if parts else np.empty((0, n))


def sample_endpoints(config, n, n_paths, first_path=0, workers=1):
    """``S_n`` for each path; same numbers as ``sample_paths(...)[:, -1]`` without storing paths."""
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if n > config.max_steps:
        raise RunawayError(f"{n} steps requested but max_steps is {config.max_steps}")
    streams = PathStreams(config.seed)
    parts = _map_batches(
        lambda a, b: _paths_block(config, streams, first_path + a, first_path + b, n, keep_path=False),
        n_paths,
        workers,
    )
    return np.concatenate(parts) if parts else np.empty(0)


def sample_path(config, n, path_id=0):
    row = sample_paths(config, n, 1, first_path=path_id)[0]
    return WalkPath(tuple(float(v) for v in row))


def _counts_block(config, streams, first, last, t):
    ids = np.arange(first, last)
    keys = streams.path_keys(ids)
    counts = np.zeros(last - first, dtype=np.int64)
    s = np.zeros(last - first)
    active = np.arange(last - first)
    k = 0
    while active.size:
        if k >= config.max_steps:
            raise RunawayError(
                f"{active.size} path(s) still at or below t={t} after max_steps={config.max_steps}"
            )
        base = DRAWS_PER_STEP * k
        kk = keys[active]
        t_next = config.step.quantile(streams.uniforms(kk, base))
        u = streams.uniforms(kk, base + 1)
        theta = pareto_2alpha(streams.uniforms(kk, base + 2), config.alpha)
        s_new = _advance(s[active], t_next, u, theta, config.alpha)
        s[active] = s_new
        below = s_new <= t
        counts[active[below]] += 1
        active = active[below]
        k += 1
    return counts


def simulate_counts(config, t, n_sims, first_path=0, workers=1):
    """``N(t)`` for paths ``first_path, ..., first_path + n_sims - 1``."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    streams = PathStreams(config.seed)
    parts = _map_batches(
        lambda a, b: _counts_block(config, streams, first_path + a, first_path + b, t),
        n_sims,
        workers,
    )
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def count_renewals(config, t, path_id=0):
    """``N(t) = inf{n : S_{n+1} > t}`` along path ``path_id``."""
    return int(simulate_counts(config, t, 1, first_path=path_id)[0])


@dataclass(frozen=True)
class RenewalStats:
    mean: float
    var: float
    se_mean: float
    se_var: float
    n_sims: int


def sample_stats(values):
    """Unbiased mean and variance with their standard errors."""
    x = np.asarray(values, dtype=float)
    n = x.size
    mean = float(x.mean())
    var = float(x.var(ddof=1))
    centred = x - mean
    m4 = float(np.mean(centred**4))
    # Var(s^2) = (mu4 - sigma^4 (n-3)/(n-1)) / n
    var_of_var = max((m4 - var**2 * (n - 3) / (n - 1)) / n, 0.0)
    return RenewalStats(mean, var, math.sqrt(var / n), math.sqrt(var_of_var), n)


def mc_renewal_stats(config, t, n_sims, workers=1):
    if n_sims < 100:
        raise ParameterError(f"n_sims must be at least 100, got {n_sims}")
    return sample_stats(simulate_counts(config, t, n_sims, workers=workers))


@dataclass(frozen=True)
class JointExceedanceResult:
    empirical_a: float
    analytic_a: float
    se_a: float
    empirical_b: float
    analytic_b: float
    se_b: float


def joint_exceedance_check(config, indices, x, n_sims, workers=1):
    """Joint exceedance probabilities of the walk at ``indices`` vs their CDF forms.

    (a) all of ``S_k > x`` for ``k`` in ``indices`` against ``1 - F_{k_1}(x)``;
    (b) ``S_{k_last} > x`` and every earlier ``S_k <= x`` against
    ``F_{k_m}(x) - F_{k_last}(x)``.
    """
    idx = [int(k) for k in indices]
    if len(idx) < 2 or any(b <= a for a, b in zip(idx, idx[1:])) or idx[0] < 1:
        raise ParameterError("indices must be strictly increasing positive integers (at least two)")
    if len(idx) > 5:
        raise ParameterError("at most five indices are supported")
    paths = sample_paths(config, idx[-1], n_sims, workers=workers)
    cols = paths[:, [k - 1 for k in idx]]
    event_a = np.all(cols > x, axis=1)
    event_b = (cols[:, -1] > x) & np.all(cols[:, :-1] <= x, axis=1)
    dist, a = config.step, config.alpha
    analytic_a = 1.0 - Fn_cdf(dist, a, idx[0], x)
    analytic_b = Fn_cdf(dist, a, idx[-2], x) - Fn_cdf(dist, a, idx[-1], x)
    pa, pb = float(event_a.mean()), float(event_b.mean())
    return JointExceedanceResult(
        pa,
        analytic_a,
        math.sqrt(pa * (1 - pa) / n_sims),
        pb,
        analytic_b,
        math.sqrt(pb * (1 - pb) / n_sims),
    )


# name used by the published interface
lemma2_check = joint_exceedance_check
