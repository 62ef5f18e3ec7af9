"""Counter-based uniforms with one independent substream per path.

Path ``k`` of a run seeded with ``seed`` owns a SplitMix64 stream whose
state is a hash of ``(seed, k)``; draw ``j`` of that stream is a pure
function of ``(seed, k, j)``. Vectorised simulation over many paths, any
chunking and any number of workers therefore produce identical numbers.
"""

import numpy as np

from .errors import ParameterError

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


class PathStreams:
    def __init__(self, seed):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise ParameterError(f"seed must be an integer, got {seed!r}")
        if not 0 <= int(seed) < 2**64:
            raise ParameterError(f"seed must lie in [0, 2**64), got {seed}")
        self.seed = int(seed)
        state = np.random.SeedSequence(self.seed).generate_state(1, dtype=np.uint64)
        self._base = np.atleast_1d(state.astype(np.uint64))

    def path_keys(self, path_ids):
        ids = np.atleast_1d(np.asarray(path_ids, dtype=np.uint64))
        with np.errstate(over="ignore"):
            return _mix64(self._base ^ _mix64((ids + np.uint64(1)) * _GAMMA))

    def uniforms(self, keys, draw):
        """Uniform(0, 1) variates, one per key, at position ``draw`` of each stream.

        ``draw`` may be a scalar or an array broadcastable against ``keys``.
        """
        d = np.asarray(draw, dtype=np.uint64)
        with np.errstate(over="ignore"):
            bits = _mix64(keys + (d + np.uint64(1)) * _GAMMA)
        # 53 high bits, shifted by half a unit so 0 and 1 never occur.
        return ((bits >> _S11).astype(np.float64) + 0.5) * 2.0**-53
