"""Deterministic random-stream derivation.

Every stochastic routine in the package receives its randomness through a
stream derived here from an explicit 64-bit seed plus an integer key path
(for simulations: cell and replication identifiers). Streams depend only on
(seed, path), never on execution order, so results are identical whether
work runs serially or across any number of workers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "derive_seed", "float_key"]


def substream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, *path)."""
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *path])))


def derive_seed(seed: int, *path: int) -> int:
    """Collapse (seed, *path) into a single 64-bit seed for nested components."""
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    state = np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def float_key(x: float) -> int:
    """Stable integer key for a float (bit pattern), for use in stream paths."""
    return int(np.float64(x).view(np.uint64))
