"""Sparse exact simulation of the protocol registers.

A state lives on a control register over Z_m joint with a permutation
register over S_n and is stored as a finite map from (control, permutation)
basis pairs to complex double amplitudes. Nothing ever materializes all of
S_n: every operation touches only the stored support, and the support grows
by at most a factor of m.

Conventions fixed here:
  * amplitudes below 1e-12 in magnitude are pruned;
  * norms and state comparisons use tolerance 1e-9;
  * the Fourier map on the control register is computed exactly in floating
    point (for m = 2 both directions are the Hadamard transformation).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .permgroup import (
    Permutation,
    compose,
    format_permutation,
    parse_permutation,
    perm_pow,
    sign,
)

NORM_TOL = 1e-9
PRUNE_TOL = 1e-12

# Basis vectors are (control value, permutation) pairs.
BasisVector = tuple[int, Permutation]


@dataclass(frozen=True)
class SparseState:
    """Norm-1 sparse amplitude map over (control, permutation) pairs.

    ``m = 1`` means the control register is absent (single control value 0).
    States are immutable values; operations return new states.
    """

    n: int
    m: int
    amps: dict[BasisVector, complex]

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        pruned: dict[BasisVector, complex] = {}
        for (control, perm), amp in self.amps.items():
            if not 0 <= control < self.m:
                raise ValueError(f"control {control} out of range for modulus {self.m}")
            if perm.n != self.n:
                raise ValueError(f"degree mismatch: state {self.n}, entry {perm.n}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                pruned[(control, perm)] = amp
        object.__setattr__(self, "amps", pruned)
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} not 1 within {NORM_TOL}")

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def support(self) -> set[BasisVector]:
        return set(self.amps)

    def fourier_control(self, direction: str) -> SparseState:
        """Fourier map on the control register.

        ``forward``: |r> -> sum_r' w^(r r') |r'> / sqrt(m) with w = exp(2 pi i / m);
        ``inverse`` uses w^(-r r'). The two compose to the identity.
        """
        if direction not in ("forward", "inverse"):
            raise ValueError(f"unknown direction {direction!r}")
        sgn = 1 if direction == "forward" else -1
        roots = [cmath.exp(sgn * 2j * math.pi * k / self.m) for k in range(self.m)]
        scale = 1.0 / math.sqrt(self.m)
        out: dict[BasisVector, complex] = {}
        for (r, perm), amp in self.amps.items():
            for r2 in range(self.m):
                key = (r2, perm)
                out[key] = out.get(key, 0j) + amp * roots[(r * r2) % self.m] * scale
        return SparseState(self.n, self.m, out)

    def controlled_power(self, pi: Permutation) -> SparseState:
        """|r>|sigma> -> |r>|sigma pi^r>."""
        if pi.n != self.n:
            raise ValueError(f"degree mismatch: state {self.n}, pi {pi.n}")
        powers = [perm_pow(pi, r) for r in range(self.m)]
        out = {
            (r, compose(perm, powers[r])): amp
            for (r, perm), amp in self.amps.items()
        }
        return SparseState(self.n, self.m, out)

    def phase_by_sign(self) -> SparseState:
        """Multiply each amplitude by (-1)^parity of its permutation."""
        out = {
            key: (-amp if sign(key[1]) else amp)
            for key, amp in self.amps.items()
        }
        return SparseState(self.n, self.m, out)

    def translate(self, tau: Permutation, side: str) -> SparseState:
        """Multiply the permutation register by tau from the given side."""
        if tau.n != self.n:
            raise ValueError(f"degree mismatch: state {self.n}, tau {tau.n}")
        if side == "left":
            out = {(r, compose(tau, perm)): amp for (r, perm), amp in self.amps.items()}
        elif side == "right":
            out = {(r, compose(perm, tau)): amp for (r, perm), amp in self.amps.items()}
        else:
            raise ValueError(f"unknown side {side!r}")
        return SparseState(self.n, self.m, out)

    def with_control(self, m: int) -> SparseState:
        """Attach a control register over Z_m in |0>. Requires a control-free state."""
        if self.m != 1:
            raise ValueError("state already has a control register")
        return SparseState(self.n, m, dict(self.amps))

    def drop_control(self) -> SparseState:
        """Discard a control register holding one definite value."""
        controls = {r for r, _ in self.amps}
        if len(controls) != 1:
            raise ValueError("control register is not definite, cannot drop it")
        return SparseState(self.n, 1, {(0, perm): amp for (_, perm), amp in self.amps.items()})

    def control_probabilities(self) -> list[float]:
        """Born probabilities of the control outcomes 0..m-1."""
        probs = [0.0] * self.m
        for (r, _), amp in self.amps.items():
            probs[r] += abs(amp) ** 2
        return probs

    def measure_control(self, rng: np.random.Generator) -> tuple[int, SparseState]:
        """Measure the control register; returns (outcome, collapsed state)."""
        probs = np.array(self.control_probabilities())
        outcome = int(rng.choice(self.m, p=probs / probs.sum()))
        weight = math.sqrt(probs[outcome])
        out = {
            key: amp / weight
            for key, amp in self.amps.items()
            if key[0] == outcome
        }
        return outcome, SparseState(self.n, self.m, out)

    def measure_full(self, rng: np.random.Generator) -> tuple[int, Permutation]:
        """Full computational-basis measurement with Born probabilities."""
        keys = sorted(self.amps, key=lambda k: (k[0], k[1].image))
        probs = np.array([abs(self.amps[k]) ** 2 for k in keys])
        idx = int(rng.choice(len(keys), p=probs / probs.sum()))
        return keys[idx]

    def to_text(self) -> str:
        """Serialize; one ``control re im n: i1 ... in`` line per entry."""
        lines = [f"QSTATE {self.n} {self.m} {len(self.amps)}"]
        for (r, perm) in sorted(self.amps, key=lambda k: (k[0], k[1].image)):
            amp = self.amps[(r, perm)]
            lines.append(f"{r} {amp.real:.17g} {amp.imag:.17g} {format_permutation(perm)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SparseState:
        lines = [line for line in text.splitlines() if line.strip()]
        header = lines[0].split()
        if len(header) != 4 or header[0] != "QSTATE":
            raise ValueError(f"bad state header: {lines[0]!r}")
        n, m, count = int(header[1]), int(header[2]), int(header[3])
        if len(lines) - 1 != count:
            raise ValueError(f"expected {count} entries, got {len(lines) - 1}")
        amps: dict[BasisVector, complex] = {}
        for line in lines[1:]:
            control_s, re_s, im_s, perm_s = line.split(maxsplit=3)
            key = (int(control_s), parse_permutation(perm_s))
            if key in amps:
                raise ValueError(f"duplicate entry for {key}")
            amps[key] = complex(float(re_s), float(im_s))
        return cls(n, m, amps)


def basis_state(control: int, sigma: Permutation, m: int) -> SparseState:
    """Single-entry state |control>|sigma> with amplitude 1."""
    if not 0 <= control < m:
        raise ValueError(f"control {control} out of range for modulus {m}")
    return SparseState(sigma.n, m, {(control, sigma): 1.0 + 0j})


def inner_product(a: SparseState, b: SparseState) -> complex:
    """<a|b> over the shared basis."""
    if (a.n, a.m) != (b.n, b.m):
        raise ValueError("states live on different registers")
    return sum(a.amps[k].conjugate() * b.amps[k] for k in a.amps.keys() & b.amps.keys())


def states_equal(a: SparseState, b: SparseState, up_to_global_phase: bool = False) -> bool:
    """Entrywise amplitude agreement within 1e-9, optionally after phase alignment."""
    if (a.n, a.m) != (b.n, b.m):
        raise ValueError("states live on different registers")
    phase = 1.0 + 0j
    if up_to_global_phase:
        overlap = inner_product(a, b)
        if abs(overlap) < NORM_TOL:
            return False
        phase = overlap / abs(overlap)
    for key in a.amps.keys() | b.amps.keys():
        if abs(a.amps.get(key, 0j) * phase - b.amps.get(key, 0j)) > NORM_TOL:
            return False
    return True
