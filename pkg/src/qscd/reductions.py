"""Security reductions as executable transformations over distinguishers.

Everything here operates on the oracle abstraction: a distinguisher sees
only the bare states of a tuple and an RNG handle, never the hidden
provenance. The module provides the worst-to-average randomization, the
search-to-distinction attack pipeline, the plus-vs-iota hybrid, and an
empirical advantage estimator with Hoeffding confidence intervals.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graphauto import Graph, PromiseInstance, coset_sample
from .permgroup import Permutation, conjugate, random_permutation, sign
from .qscdcyc import gen_cyc
from .qscdff import (
    MINUS,
    PLUS,
    Distinguisher,
    Provenance,
    PureSample,
    SampleTuple,
    convert,
    distinguish,
    gen_iota,
    gen_plus,
)
from .qstate import SparseState

TupleSource = Callable[[np.random.Generator], SampleTuple]


@dataclass(frozen=True)
class DistinguisherReport:
    """Empirical acceptance counts for two sources plus a Hoeffding interval."""

    trials0: int
    trials1: int
    acc0: int
    acc1: int
    confidence: float = 0.01

    def __post_init__(self):
        if self.trials0 < 1 or self.trials1 < 1:
            raise ValueError("need at least one trial per side")
        if not 0 <= self.acc0 <= self.trials0 or not 0 <= self.acc1 <= self.trials1:
            raise ValueError("acceptance counts out of range")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must be in (0, 1)")

    @property
    def advantage(self) -> float:
        return abs(self.acc0 / self.trials0 - self.acc1 / self.trials1)

    @property
    def ci_halfwidth(self) -> float:
        return math.sqrt(math.log(2.0 / self.confidence) / (2.0 * min(self.trials0, self.trials1)))

    def report_lines(self, seed: int | None = None, params: str | None = None) -> list[str]:
        """One key per line plus a single-line summary, stable for diffing."""
        lines = [
            f"trials0={self.trials0}",
            f"trials1={self.trials1}",
            f"acc0={self.acc0}",
            f"acc1={self.acc1}",
            f"advantage={self.advantage:.6f}",
            f"ci={self.ci_halfwidth:.6f}",
            f"confidence={self.confidence:.6f}",
        ]
        if seed is not None:
            lines.append(f"seed={seed}")
        if params is not None:
            lines.append(f"params={params}")
        lines.append(
            f"summary trials={self.trials0}/{self.trials1} "
            f"advantage={self.advantage:.6f} ci={self.ci_halfwidth:.6f}"
        )
        return lines


@dataclass(frozen=True)
class AttackParams:
    """Tuple counts for the attack pipeline.

    The analysis sizes the pipeline as 8 p^2 n tuples per side with
    acceptance threshold 4 p n for a nominal polynomial value p; desk-scale
    runs override both. ``formula_tuples``/``formula_threshold`` echo the
    analysis values so reports can record requested and nominal sizes.
    """

    k: int
    p: int
    tuples_per_side: int
    threshold: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need k >= 1 samples per tuple")
        if self.p < 1:
            raise ValueError("nominal polynomial value must be >= 1")
        if not 0 < self.threshold < self.tuples_per_side:
            raise ValueError("need 0 < threshold < tuples_per_side")

    @classmethod
    def from_polynomial(cls, n: int, p: int, k: int = 1) -> "AttackParams":
        return cls(k=k, p=p, tuples_per_side=8 * p * p * n, threshold=4 * p * n)

    def formula_tuples(self, n: int) -> int:
        return 8 * self.p * self.p * n

    def formula_threshold(self, n: int) -> int:
        return 4 * self.p * n


def plus_source(pi: Permutation, k: int = 1) -> TupleSource:
    return lambda rng: SampleTuple(tuple(gen_plus(pi, rng) for _ in range(k)))


def minus_source(pi: Permutation, k: int = 1) -> TupleSource:
    return lambda rng: SampleTuple(tuple(convert(gen_plus(pi, rng)) for _ in range(k)))


def iota_source(n: int, k: int = 1) -> TupleSource:
    return lambda rng: SampleTuple(tuple(gen_iota(n, rng) for _ in range(k)))


def cyc_source(pi: Permutation, s: int, m: int, k: int = 1) -> TupleSource:
    def draw(rng: np.random.Generator) -> SampleTuple:
        samples = []
        for _ in range(k):
            cyc = gen_cyc(pi, s, m, rng)
            samples.append(PureSample(cyc.state, cyc.provenance))
        return SampleTuple(tuple(samples))

    return draw


def omniscient_distinguisher(pi: Permutation) -> Distinguisher:
    """The trapdoor ceiling: holds the hidden key, accepts plus states."""

    def run(states: Sequence[SparseState], rng: np.random.Generator) -> int:
        return distinguish(states[0], pi, rng)

    return run


def coin_distinguisher() -> Distinguisher:
    def run(states: Sequence[SparseState], rng: np.random.Generator) -> int:
        return int(rng.integers(2))

    return run


def basis_measure_distinguisher() -> Distinguisher:
    """Measures the first sample in the computational basis, accepts even permutations."""

    def run(states: Sequence[SparseState], rng: np.random.Generator) -> int:
        _, perm = states[0].measure_full(rng)
        return 1 if sign(perm) == 0 else 0

    return run


def randomize_to_average(tup: SampleTuple, rng: np.random.Generator) -> SampleTuple:
    """Rerandomize one fixed hidden key into a uniform one.

    Draws a single uniform tau and right-translates every sample by it,
    which conjugates the hidden key by tau without touching support sizes or
    amplitude magnitudes. Over uniform tau the conjugate is uniform over the
    whole key class.
    """
    tau = random_permutation(tup.n, rng)
    out = []
    for sample in tup.samples:
        prov = sample.provenance
        if prov.kind in (PLUS, MINUS):
            prov = Provenance(prov.kind, conjugate(prov.pi, tau))
        out.append(PureSample(sample.state.translate(tau, "right"), prov))
    return SampleTuple(tuple(out))


def ga_attack(
    g: Graph | PromiseInstance,
    dist: Distinguisher,
    params: AttackParams,
    rng: np.random.Generator,
    l_key_copies: int | None = None,
) -> int:
    """Decide a promise instance by feeding coset draws to a distinguisher.

    Builds tuples_per_side tuples of plus draws and as many of minus draws,
    counts the distinguisher's acceptances on each side, and answers YES
    when the counts differ by at least the threshold. On a NO instance both
    sides are iota draws, so the counts concentrate together.

    With ``l_key_copies`` set, tuples take the intercepted-message shape
    instead: one challenge draw (plus on one side, minus on the other)
    followed by that many plus draws standing in for encryption-key copies.
    """
    inst = g if isinstance(g, PromiseInstance) else PromiseInstance(g)

    def make_tuple(mode: str) -> SampleTuple:
        if l_key_copies is None:
            draws = [coset_sample(inst, mode, rng) for _ in range(params.k)]
        else:
            draws = [coset_sample(inst, mode, rng)]
            draws.extend(coset_sample(inst, PLUS, rng) for _ in range(l_key_copies))
        return SampleTuple(tuple(draws))

    r_plus = sum(dist(make_tuple(PLUS).states(), rng) for _ in range(params.tuples_per_side))
    r_minus = sum(dist(make_tuple(MINUS).states(), rng) for _ in range(params.tuples_per_side))
    return 1 if abs(r_plus - r_minus) >= params.threshold else 0


def hybrid_to_iota(dist: Distinguisher) -> Distinguisher:
    """Distinguisher against (plus vs iota) built from one against (plus vs minus).

    Per invocation, a coin chooses between running the given distinguisher
    directly and running it on the sign-converted tuple with the answer
    complemented. Conversion maps plus draws to minus draws and fixes iota,
    and the complement keeps the two branches' acceptance gaps aligned
    instead of letting them cancel, so the combined plus-vs-iota gap is
    exactly half the original plus-vs-minus gap.
    """

    def hybrid(states: Sequence[SparseState], rng: np.random.Generator) -> int:
        if rng.integers(2) == 0:
            return dist(states, rng)
        converted = [state.phase_by_sign() for state in states]
        return 1 - dist(converted, rng)

    return hybrid


def estimate_advantage(
    dist: Distinguisher,
    source_a: TupleSource,
    source_b: TupleSource,
    trials: int,
    rng: np.random.Generator,
    confidence: float = 0.01,
    jobs: int = 1,
) -> DistinguisherReport:
    """Empirical acceptance gap of a distinguisher between two tuple sources.

    Every trial runs on its own generator spawned from ``rng``, so the
    aggregate is independent of trial order and of ``jobs``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    children = rng.spawn(2 * trials)

    def run(t: int) -> tuple[int, int]:
        gen_a, gen_b = children[2 * t], children[2 * t + 1]
        return (
            dist(source_a(gen_a).states(), gen_a),
            dist(source_b(gen_b).states(), gen_b),
        )

    if jobs <= 1:
        outcomes = [run(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, range(trials)))
    acc0 = sum(a for a, _ in outcomes)
    acc1 = sum(b for _, b in outcomes)
    return DistinguisherReport(trials, trials, acc0, acc1, confidence)
