"""The cyclic generalization: m-point coset states over keys in K_n^m.

A draw for key pi and symbol s is (1/sqrt(m)) sum_t w^(st) |sigma pi^t> with
w = exp(2 pi i / m) and a uniform hiding translation sigma. The decoder runs
the generalized controlled-key test and recovers s exactly.

With m = 2 this coincides with the fixed-point-free primitive: symbol 0
gives plus states and symbol 1 gives minus states. No key-free conversion
between symbols is offered for m > 2, because none exists: the m = 2
conversion rides on the sign map, the only homomorphism from S_n onto a
cyclic group (its kernel must be a normal subgroup, and for n > 4 those are
just the trivial group, the alternating group, and S_n itself), so there is
no analogous phase trick onto Z_m.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .permgroup import Permutation, is_cyclic_class, perm_pow, random_permutation
from .qscdff import Provenance
from .qstate import SparseState


@dataclass(frozen=True)
class CyclicSample:
    """One pure draw from the symbol-s mixture for a hidden key in K_n^m."""

    state: SparseState
    n: int
    m: int
    provenance: Provenance


def require_cyclic_key(pi: Permutation, m: int) -> None:
    if m < 2:
        raise ValueError(f"cyclic order must be >= 2, got {m}")
    if not is_cyclic_class(pi, m):
        raise ValueError(f"key is not a product of disjoint {m}-cycles")


def gen_cyc(pi: Permutation, s: int, m: int, rng: np.random.Generator) -> CyclicSample:
    """Fresh draw encoding symbol s under key pi in K_n^m.

    Builds the Fourier superposition over the cyclic group {id, pi, ...,
    pi^(m-1)} by direct evaluation, then hides the coset with a uniform left
    translation.
    """
    require_cyclic_key(pi, m)
    if not 0 <= s < m:
        raise ValueError(f"symbol {s} out of range for modulus {m}")
    scale = 1.0 / math.sqrt(m)
    amps = {
        (0, perm_pow(pi, t)): scale * cmath.exp(2j * math.pi * s * t / m)
        for t in range(m)
    }
    state = SparseState(pi.n, 1, amps)
    sigma = random_permutation(pi.n, rng)
    state = state.translate(sigma, "left")
    return CyclicSample(state, pi.n, m, Provenance.phi(pi, s))


def _decode_circuit(sample: CyclicSample, pi: Permutation) -> SparseState:
    require_cyclic_key(pi, sample.m)
    if pi.n != sample.n:
        raise ValueError(f"degree mismatch: sample {sample.n}, key {pi.n}")
    state = sample.state.with_control(sample.m)
    state = state.fourier_control("inverse")
    state = state.controlled_power(pi)
    return state.fourier_control("forward")


def decode_cyc(sample: CyclicSample, pi: Permutation, rng: np.random.Generator) -> int:
    """Generalized controlled-key test; returns the measured symbol."""
    outcome, _ = _decode_circuit(sample, pi).measure_control(rng)
    return outcome


def decode_distribution(sample: CyclicSample, pi: Permutation) -> list[float]:
    """Exact outcome distribution of the decoder over Z_m."""
    return _decode_circuit(sample, pi).control_probabilities()
