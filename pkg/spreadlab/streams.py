# spreadlab/streams.py
"""
Reproducible random streams.

A substream is a pure function of (seed, key...): numpy's SeedSequence mixes
the user seed with a spawn key, and Philox (a counter-based generator) turns
that into a stream. Work item i therefore never depends on how many workers
ran or in which order items were produced.
"""
import numpy as np

from .errors import ArgumentError

# Seeds are stored as unsigned 64-bit integers (snapshot cache header).
SEED_LIMIT = 1 << 64


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ArgumentError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if seed < 0:
        raise ArgumentError(f"seed must be non-negative, got {seed}")
    if seed >= SEED_LIMIT:
        raise ArgumentError(f"seed must be below 2**64, got {seed}")
    return seed


def substream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def fresh_seed() -> int:
    """A 32-bit seed drawn from OS entropy (used only when the user gives none)."""
    return int(np.random.SeedSequence().entropy % (1 << 32))
