"""Reproducible random streams.

Every stream is keyed by an experiment seed plus a tuple of integer keys
(replicate index, phase, ...).  Streams with different keys are
statistically independent, and a stream depends only on its own key, so
replicates can run in any order or in separate processes.
"""

from __future__ import annotations

import numpy as np

# phase keys
PHASE_OBSERVED = 0
PHASE_CHAIN = 1
PHASE_SIMULATE = 2
PHASE_INIT = 3
PHASE_PILOT = 4
PHASE_ABC = 5
PHASE_PROFILE = 6


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Generator for ``(seed, *keys)``.

    The key tuple is hashed by :class:`numpy.random.SeedSequence`; the
    generator is PCG64.
    """
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
