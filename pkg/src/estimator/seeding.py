"""
Seed Derivation
===============
Deterministic, counter-based seed derivation for reproducible Monte Carlo.

Every trial owns a generator seeded from ``SeedSequence(entropy, spawn_key)``
so results do not depend on execution order or parallel scheduling.
"""

from typing import Tuple, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    """
    Normalize an integer, SeedSequence or Generator into a SeedSequence.

    A Generator is consumed: one 128-bit draw becomes the new entropy.
    """
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        words = seed.integers(0, 2 ** 32, size=4, dtype=np.uint64)
        return np.random.SeedSequence([int(w) for w in words])
    return np.random.SeedSequence(int(seed))


def child_sequence(parent: np.random.SeedSequence, *indices: int) -> np.random.SeedSequence:
    """Child sequence addressed by ``indices`` below ``parent``."""
    key: Tuple[int, ...] = tuple(parent.spawn_key) + tuple(int(i) for i in indices)
    return np.random.SeedSequence(parent.entropy, spawn_key=key)


def child_generator(parent: np.random.SeedSequence, *indices: int) -> np.random.Generator:
    """Independent generator for the cell or trial addressed by ``indices``."""
    return np.random.default_rng(child_sequence(parent, *indices))
