"""Deterministic derivation of independent RNG streams from one root seed.

Stream (i, j, ...) of root seed s is the generator seeded by
``SeedSequence(entropy=s, spawn_key=(i, j, ...))``. Distinct stream indices
give statistically independent generators, so trial loops can run in any
order (or in parallel) and still reproduce byte-identical results.
"""

from __future__ import annotations

import numpy as np


def derive_rng(root_seed: int, *stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(root_seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.default_rng(seq)
