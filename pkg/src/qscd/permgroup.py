"""Exact arithmetic over the symmetric group S_n and its special key classes.

Points are 1-based throughout: a permutation of degree n acts on {1,...,n}.
The two key classes are K_n (fixed-point-free involutions, i.e. products of
n/2 disjoint transpositions) and K_n^m (disjoint n/m cycles of length m).
Admissible degrees for the fixed-point-free setting are n = 2(2k+1), i.e.
n = 2, 6, 10, ...; for those degrees every element of K_n is odd.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

FF = "ff"
CYC = "cyc"


@dataclass(frozen=True)
class Permutation:
    """Immutable permutation of {1..n}, stored as the tuple of images.

    ``image[i-1]`` is where point ``i`` maps.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", image)
        n = len(image)
        if n < 1:
            raise ValueError("permutation degree must be positive")
        if sorted(image) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection on 1..{n}: {image}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, point: int) -> int:
        return self.image[point - 1]

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def is_identity(sigma: Permutation) -> bool:
    return all(sigma.image[i] == i + 1 for i in range(sigma.n))


def from_cycles(n: int, cycles: list[tuple[int, ...]]) -> Permutation:
    """Permutation of degree n from disjoint cycles, e.g. [(1, 2, 3)]."""
    image = list(range(1, n + 1))
    seen: set[int] = set()
    for cycle in cycles:
        for point in cycle:
            if point in seen:
                raise ValueError(f"point {point} appears in two cycles")
            seen.add(point)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            image[a - 1] = b
    return Permutation(tuple(image))


def cycles(sigma: Permutation) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its smallest point, sorted."""
    out = []
    seen = [False] * sigma.n
    for start in range(1, sigma.n + 1):
        if seen[start - 1]:
            continue
        cycle = [start]
        seen[start - 1] = True
        point = sigma(start)
        while point != start:
            cycle.append(point)
            seen[point - 1] = True
            point = sigma(point)
        if len(cycle) > 1:
            out.append(tuple(cycle))
    return out


def cycle_type(sigma: Permutation) -> tuple[int, ...]:
    """Sorted cycle lengths including fixed points."""
    lengths = [len(c) for c in cycles(sigma)]
    lengths.extend([1] * (sigma.n - sum(lengths)))
    return tuple(sorted(lengths))


def _check_same_degree(a: Permutation, b: Permutation) -> None:
    if a.n != b.n:
        raise ValueError(f"degree mismatch: {a.n} vs {b.n}")


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """(sigma tau)(i) = sigma(tau(i)); right-multiplying sigma by pi is compose(sigma, pi)."""
    _check_same_degree(sigma, tau)
    return Permutation(tuple(sigma.image[t - 1] for t in tau.image))


def inverse(sigma: Permutation) -> Permutation:
    image = [0] * sigma.n
    for i, t in enumerate(sigma.image, start=1):
        image[t - 1] = i
    return Permutation(tuple(image))


def perm_pow(sigma: Permutation, r: int) -> Permutation:
    """sigma composed with itself r times (r >= 0)."""
    if r < 0:
        raise ValueError("negative power not supported")
    out = identity(sigma.n)
    for _ in range(r):
        out = compose(out, sigma)
    return out


def sign(sigma: Permutation) -> int:
    """Parity bit: 0 for even permutations, 1 for odd."""
    return (sigma.n - len(cycle_type(sigma))) % 2


def conjugate(pi: Permutation, tau: Permutation) -> Permutation:
    """tau^-1 pi tau; preserves cycle type, so maps K_n into K_n."""
    _check_same_degree(pi, tau)
    return compose(compose(inverse(tau), pi), tau)


def is_ff_degree(n: int) -> bool:
    """Membership in the admissible degree set {2(2k+1)} = {2, 6, 10, ...}."""
    return n >= 2 and n % 4 == 2


def is_fpf_involution(sigma: Permutation) -> bool:
    """Membership in K_n: order two and no fixed point."""
    return all(l == 2 for l in cycle_type(sigma))


def is_cyclic_class(sigma: Permutation, m: int) -> bool:
    """Membership in K_n^m: disjoint n/m cycles, all of length m."""
    return all(l == m for l in cycle_type(sigma))


@dataclass(frozen=True)
class SecurityParam:
    """Degree plus key-class selector for the two schemes.

    ``ff`` keys live in K_n and need n in {2, 6, 10, ...}; ``cyc`` keys live
    in K_n^m and need m >= 2 dividing n.
    """

    n: int
    kind: str
    m: int = 2

    def __post_init__(self):
        if self.kind == FF:
            if not is_ff_degree(self.n):
                raise ValueError(f"ff degree must be 2 mod 4, got {self.n}")
            if self.m != 2:
                raise ValueError("ff mode has control modulus 2")
        elif self.kind == CYC:
            if self.m < 2:
                raise ValueError(f"cyclic order must be >= 2, got {self.m}")
            if self.n % self.m != 0:
                raise ValueError(f"{self.m} does not divide {self.n}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def ff(cls, n: int) -> "SecurityParam":
        return cls(n=n, kind=FF)

    @classmethod
    def cyc(cls, n: int, m: int) -> "SecurityParam":
        return cls(n=n, kind=CYC, m=m)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation(tuple(int(x) + 1 for x in rng.permutation(n)))


def sample_fpf_involution(param: SecurityParam, rng: np.random.Generator) -> Permutation:
    """Uniform element of K_n via a random perfect matching.

    Repeatedly pairs the smallest unmatched point with a uniformly random
    other unmatched point, which hits every perfect matching with equal
    probability.
    """
    if param.kind != FF:
        raise ValueError("sample_fpf_involution needs an ff parameter")
    unmatched = list(range(1, param.n + 1))
    image = [0] * param.n
    while unmatched:
        a = unmatched.pop(0)
        b = unmatched.pop(int(rng.integers(len(unmatched))))
        image[a - 1] = b
        image[b - 1] = a
    return Permutation(tuple(image))


def sample_cyclic(param: SecurityParam, rng: np.random.Generator) -> Permutation:
    """Uniform element of K_n^m.

    Shuffles {1..n}, cuts the shuffle into n/m blocks of m points, and turns
    each block into one m-cycle. Every element of K_n^m arises from exactly
    m^(n/m) * (n/m)! shuffles, so the output is uniform.
    """
    if param.kind != CYC:
        raise ValueError("sample_cyclic needs a cyc parameter")
    points = [int(x) + 1 for x in rng.permutation(param.n)]
    image = [0] * param.n
    for start in range(0, param.n, param.m):
        block = points[start:start + param.m]
        for a, b in zip(block, block[1:] + block[:1]):
            image[a - 1] = b
    return Permutation(tuple(image))


def fpf_involutions(n: int) -> list[Permutation]:
    """All of K_n, enumerated by recursive matching (desk scale)."""
    if n % 2 != 0:
        return []

    def match(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
        if not points:
            return [[]]
        a = points[0]
        out = []
        for idx in range(1, len(points)):
            b = points[idx]
            rest = points[1:idx] + points[idx + 1:]
            for tail in match(rest):
                out.append([(a, b)] + tail)
        return out

    result = []
    for pairs in match(tuple(range(1, n + 1))):
        image = list(range(1, n + 1))
        for a, b in pairs:
            image[a - 1] = b
            image[b - 1] = a
        result.append(Permutation(tuple(image)))
    return result


def cyclic_class(n: int, m: int) -> list[Permutation]:
    """All of K_n^m by filtering S_n on cycle type. Factorial scan: small n only."""
    out = []
    for images in itertools.permutations(range(1, n + 1)):
        p = Permutation(images)
        if is_cyclic_class(p, m):
            out.append(p)
    return out


def format_permutation(sigma: Permutation) -> str:
    """Text form ``n: i1 i2 ... in`` with 1-based images."""
    return f"{sigma.n}: " + " ".join(str(x) for x in sigma.image)


def parse_permutation(text: str) -> Permutation:
    head, _, tail = text.strip().partition(":")
    if not tail:
        raise ValueError(f"missing ':' in permutation text: {text!r}")
    n = int(head)
    image = tuple(int(x) for x in tail.split())
    if len(image) != n:
        raise ValueError(f"expected {n} images, got {len(image)}")
    return Permutation(image)
