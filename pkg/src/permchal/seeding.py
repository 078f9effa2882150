"""Deterministic seed derivation and keyed integer mixing.

Everything randomized in this package flows through explicit 64-bit
seeds. Trial streams are derived with a splitmix64-style avalanche so
that results are independent of execution order and worker count, and
the same mixer doubles as the keyed "pseudorandom predicate" primitive
used by attacks (scalar and numpy-array forms).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalization round; a bijection on 64-bit ints."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Derive the 64-bit RNG seed for one trial.

    Injective in ``trial_index`` for a fixed master seed (the index is
    multiplied by an odd constant, XORed into the master and passed
    through a bijective mixer), so distinct trials never share a stream.
    """
    if trial_index < 0:
        raise ValueError("trial_index must be non-negative")
    basis = (master_seed & _MASK64) ^ ((trial_index * _GOLDEN) & _MASK64)
    return splitmix64(basis)


def trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_trial_seed(master_seed, trial_index)))


def mix64(key: int, *values: int) -> int:
    """Keyed avalanche over a tuple of ints (scalar form)."""
    acc = splitmix64(key & _MASK64)
    for v in values:
        acc = splitmix64((acc ^ (v & _MASK64)) & _MASK64)
    return acc


def mix64_array(key: int, *columns: np.ndarray) -> np.ndarray:
    """Keyed avalanche applied elementwise to aligned uint64 columns."""
    acc = np.full(columns[0].shape, splitmix64(key & _MASK64), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for col in columns:
            acc = _splitmix64_array(acc ^ col.astype(np.uint64))
    return acc


def _splitmix64_array(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))
