"""Counter-based splitmix64 PRNG for the jitted kernels.

Keeps training deterministic for a fixed seed regardless of worker
scheduling: state lives in a 1-element uint64 array owned by the caller,
never in global RNG state.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def next_u64(state):
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def next_double(state):
    # 53-bit mantissa -> uniform in [0, 1)
    return float(next_u64(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, inline="always")
def next_below(state, n):
    # unbiased enough for our ranges; n is tiny relative to 2^64
    return int(next_u64(state) % np.uint64(n))


@njit(cache=True)
def shuffle_inplace(state, arr):
    for i in range(arr.shape[0] - 1, 0, -1):
        j = next_below(state, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


def make_state(seed: int) -> np.ndarray:
    return np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)
