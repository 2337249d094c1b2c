"""The fixed-point-free coset-state primitive.

Samplers for the three single-register mixed states (the plus and minus
two-point coset states for a hidden key pi in K_n, and the maximally mixed
state iota), the sign-phase conversion between plus and minus, and the
trapdoor test that decides plus/minus given pi.

A mixed state is never held as a density matrix: each draw materializes one
pure SparseState together with a provenance tag. Provenance exists only for
test and orchestration code; distinguishers receive bare states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .permgroup import (
    Permutation,
    identity,
    is_ff_degree,
    is_fpf_involution,
    random_permutation,
)
from .qstate import SparseState, basis_state

PLUS = "plus"
MINUS = "minus"
IOTA = "iota"
PHI = "phi"


@dataclass(frozen=True)
class Provenance:
    """Hidden tag recording which mixture a pure draw came from."""

    kind: str
    pi: Permutation | None = None
    s: int | None = None

    @classmethod
    def plus(cls, pi: Permutation) -> "Provenance":
        return cls(PLUS, pi)

    @classmethod
    def minus(cls, pi: Permutation) -> "Provenance":
        return cls(MINUS, pi)

    @classmethod
    def iota(cls) -> "Provenance":
        return cls(IOTA)

    @classmethod
    def phi(cls, pi: Permutation, s: int) -> "Provenance":
        return cls(PHI, pi, s)


@dataclass(frozen=True)
class PureSample:
    """One pure draw from a mixture; the state has no control register."""

    state: SparseState
    provenance: Provenance


@dataclass(frozen=True)
class SampleTuple:
    """An ordered tuple of draws sharing one hidden key (or all iota)."""

    samples: tuple[PureSample, ...]

    def __post_init__(self):
        if not self.samples:
            raise ValueError("need at least one sample")
        degrees = {s.state.n for s in self.samples}
        if len(degrees) != 1:
            raise ValueError(f"samples of mixed degree: {degrees}")

    @property
    def k(self) -> int:
        return len(self.samples)

    @property
    def n(self) -> int:
        return self.samples[0].state.n

    def states(self) -> list[SparseState]:
        """What a distinguisher is allowed to see."""
        return [s.state for s in self.samples]


# A distinguisher maps the visible states plus an RNG handle to a bit.
Distinguisher = Callable[[Sequence[SparseState], np.random.Generator], int]


def require_ff_key(pi: Permutation) -> None:
    if not is_ff_degree(pi.n):
        raise ValueError(f"degree {pi.n} is not 2 mod 4")
    if not is_fpf_involution(pi):
        raise ValueError("key is not a fixed-point-free involution")


def _uncompute_control(state: SparseState, pi: Permutation) -> SparseState:
    # Subtract 1 mod m from the control exactly where the permutation
    # register equals pi; legitimate because the generator knows pi.
    out = {}
    for (r, perm), amp in state.amps.items():
        if perm == pi:
            r = (r - 1) % state.m
        out[(r, perm)] = amp
    return SparseState(state.n, state.m, out)


def gen_plus(pi: Permutation, rng: np.random.Generator) -> PureSample:
    """Fresh draw from the plus mixture for key pi.

    Runs the exact generation circuit: start in |0>|id>, split the control,
    apply the controlled key, uncompute the control against pi, then hide the
    coset by a uniform left translation. The result is (|sigma> + |sigma pi>)
    / sqrt(2) for a uniform sigma.
    """
    require_ff_key(pi)
    state = basis_state(0, identity(pi.n), m=2)
    state = state.fourier_control("forward")
    state = state.controlled_power(pi)
    state = _uncompute_control(state, pi)
    sigma = random_permutation(pi.n, rng)
    state = state.translate(sigma, "left")
    return PureSample(state.drop_control(), Provenance.plus(pi))


def gen_iota(n: int, rng: np.random.Generator) -> PureSample:
    """Fresh draw from the maximally mixed state: |sigma> for uniform sigma."""
    if n < 1:
        raise ValueError("degree must be positive")
    sigma = random_permutation(n, rng)
    return PureSample(basis_state(0, sigma, m=1), Provenance.iota())


def convert(sample: PureSample) -> PureSample:
    """Sign-phase flip: maps plus draws to minus draws and fixes iota.

    Works without the key: multiplying each basis amplitude by (-1)^parity
    flips the relative phase of a two-point coset state because the hidden
    involution is odd, so the two support points have opposite parity.
    """
    if not is_ff_degree(sample.state.n):
        raise ValueError(f"degree {sample.state.n} is not 2 mod 4")
    prov = sample.provenance
    if prov.kind == PLUS:
        prov = Provenance.minus(prov.pi)
    elif prov.kind == MINUS:
        prov = Provenance.plus(prov.pi)
    return PureSample(sample.state.phase_by_sign(), prov)


def _test_circuit(state: SparseState, pi: Permutation) -> SparseState:
    # The controlled-key test: split a fresh control, apply the controlled
    # key, recombine. For a plus state the control ends in |0>, for a minus
    # state in |1>; for m = 2 both Fourier directions are the Hadamard map.
    attached = state.with_control(2)
    attached = attached.fourier_control("forward")
    attached = attached.controlled_power(pi)
    return attached.fourier_control("forward")


def distinguish(sample: PureSample | SparseState, pi: Permutation, rng: np.random.Generator) -> int:
    """Trapdoor test: 1 (YES, plus) on control outcome 0, else 0 (NO, minus)."""
    require_ff_key(pi)
    state = getattr(sample, "state", sample)
    outcome, _ = _test_circuit(state, pi).measure_control(rng)
    return 1 if outcome == 0 else 0


def distinguish_probabilities(sample: PureSample | SparseState, pi: Permutation) -> list[float]:
    """Exact outcome distribution [P(control 0), P(control 1)] of the test."""
    require_ff_key(pi)
    state = getattr(sample, "state", sample)
    return _test_circuit(state, pi).control_probabilities()
