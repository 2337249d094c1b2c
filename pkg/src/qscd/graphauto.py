"""Graphs, automorphism search, label gadgets, and the promise-problem bridge.

The promise problem asks, for a graph whose node count n is 2 mod 4, whether
it has a unique nontrivial automorphism that is a fixed-point-free
involution (YES) or none at all (NO). ``koebler_reduce`` turns an arbitrary
automorphism-existence question into a sequence of such promise queries via
node-distinguishing label gadgets, and ``coset_sample`` turns a promise
instance into coset-superposition draws over S_n.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .permgroup import (
    Permutation,
    compose,
    identity,
    is_ff_degree,
    is_fpf_involution,
    is_identity,
    random_permutation,
    sign,
)
from .qscdff import MINUS, PLUS, Provenance, PureSample
from .qstate import SparseState


class PromiseViolation(Exception):
    """An oracle query fell outside the promise."""


@dataclass(frozen=True)
class Graph:
    """Undirected graph on nodes {1..node_count}; canonical edge storage."""

    node_count: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("graph needs at least one node")
        canonical = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.node_count and 1 <= v <= self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            canonical.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canonical))

    def adjacency(self) -> list[set[int]]:
        """0-based neighbor sets."""
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u - 1].add(v - 1)
            adj[v - 1].add(u - 1)
        return adj


def apply_perm(sigma: Permutation, g: Graph) -> Graph:
    """Relabel nodes: edge {u, v} becomes {sigma(u), sigma(v)}."""
    if sigma.n != g.node_count:
        raise ValueError(f"degree mismatch: perm {sigma.n}, graph {g.node_count}")
    return Graph(g.node_count, frozenset((sigma(u), sigma(v)) for u, v in g.edges))


def complement(g: Graph) -> Graph:
    edges = {
        (u, v)
        for u in range(1, g.node_count + 1)
        for v in range(u + 1, g.node_count + 1)
        if (u, v) not in g.edges
    }
    return Graph(g.node_count, frozenset(edges))


def is_connected(g: Graph) -> bool:
    adj = g.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.node_count


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shift = a.node_count
    edges = set(a.edges)
    edges.update((u + shift, v + shift) for u, v in b.edges)
    return Graph(a.node_count + b.node_count, frozenset(edges))


def format_graph(g: Graph) -> str:
    lines = [f"{g.node_count} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty graph file")
    n, m = (int(x) for x in lines[0].split())
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edges, got {len(lines) - 1}")
    edges: set[tuple[int, int]] = set()
    for line in lines[1:]:
        u, v = (int(x) for x in line.split())
        if not 1 <= u < v <= n:
            raise ValueError(f"bad edge line {line!r}: need 1 <= u < v <= {n}")
        if (u, v) in edges:
            raise ValueError(f"duplicate edge {u} {v}")
        edges.add((u, v))
    return Graph(n, frozenset(edges))


@dataclass(frozen=True)
class AutGroup:
    """Explicit list of automorphisms, identity included."""

    elements: tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def nontrivial(self) -> list[Permutation]:
        return [p for p in self.elements if not is_identity(p)]

    def pointwise_stabilizer(self, upto: int) -> list[Permutation]:
        """Elements fixing 1..upto pointwise."""
        return [
            p for p in self.elements
            if all(p(x) == x for x in range(1, upto + 1))
        ]


def _refined_colors(adj: list[set[int]]) -> list[int]:
    # Iterated partition refinement by neighbor-color multisets (degrees on
    # the first round). Refinement only splits classes, so a stable class
    # count means a stable partition.
    n = len(adj)
    colors = [0] * n
    count = 1
    while True:
        sig = [
            (colors[v], tuple(sorted(colors[u] for u in adj[v])))
            for v in range(n)
        ]
        palette = {s: c for c, s in enumerate(sorted(set(sig)))}
        new = [palette[s] for s in sig]
        if len(palette) in (count, n):
            return new
        colors, count = new, len(palette)


def automorphisms(g: Graph, node_limit: int = 40) -> AutGroup:
    """Complete automorphism list by backtracking over the refined partition."""
    n = g.node_count
    if n > node_limit:
        raise ValueError(f"{n} nodes exceeds the configured limit {node_limit}")
    adj = g.adjacency()
    colors = _refined_colors(adj)
    members: dict[int, list[int]] = defaultdict(list)
    for v in range(n):
        members[colors[v]].append(v)
    order = sorted(range(n), key=lambda v: (len(members[colors[v]]), colors[v], v))

    mapping = [-1] * n
    target_used = [False] * n
    assigned_targets: set[int] = set()
    found: list[Permutation] = []

    def extend(idx: int) -> None:
        if idx == n:
            found.append(Permutation(tuple(mapping[v] + 1 for v in range(n))))
            return
        v = order[idx]
        assigned_nbrs = [u for u in adj[v] if mapping[u] != -1]
        for w in members[colors[v]]:
            if target_used[w]:
                continue
            if any(mapping[u] not in adj[w] for u in assigned_nbrs):
                continue
            if len(adj[w] & assigned_targets) != len(assigned_nbrs):
                continue
            mapping[v] = w
            target_used[w] = True
            assigned_targets.add(w)
            extend(idx + 1)
            mapping[v] = -1
            target_used[w] = False
            assigned_targets.discard(w)

    extend(0)
    found.sort(key=lambda p: p.image)
    return AutGroup(tuple(found))


def _attach_chain(g: Graph, node: int, chain_len: int, branch_pos: int, tail_len: int) -> Graph:
    # Hang a path of chain_len new nodes on `node`, then a path of tail_len
    # new nodes on the branch_pos-th chain node. New nodes are numbered after
    # the existing ones in creation order.
    if not 1 <= node <= g.node_count:
        raise ValueError(f"node {node} out of range")
    base = g.node_count
    edges = set(g.edges)
    prev = node
    for k in range(1, chain_len + 1):
        edges.add((prev, base + k))
        prev = base + k
    prev = base + branch_pos
    for k in range(1, tail_len + 1):
        edges.add((prev, base + chain_len + k))
        prev = base + chain_len + k
    return Graph(base + chain_len + tail_len, frozenset(edges))


def attach_label(g: Graph, node: int, label_index: int, chain_bonus: int = 0) -> Graph:
    """Node-distinguishing gadget: a chain of 2n+3 new nodes hung on `node`
    plus a tail of label_index (+ chain_bonus) nodes hung on the chain's
    (n+2)-nd node, n being the current node count.

    Adds exactly 2n + label_index + chain_bonus + 3 nodes. Distinct indices
    give distinct gadget sizes, which pins each labeled node under any
    automorphism without creating new ones.
    """
    if label_index < 1:
        raise ValueError("label index must be >= 1")
    n = g.node_count
    return _attach_chain(g, node, 2 * n + 3, n + 2, label_index + chain_bonus)


def build_query(g: Graph, fixed: list[int], i: int, j: int) -> Graph:
    """Promise-problem query graph for the pair (i, j) with `fixed` pinned.

    Two copies of g carry gadgets with indices 1..len(fixed) on the fixed
    nodes. Both target nodes are labeled in both copies, with the two final
    gadget sizes exchanged between the copies, so the copies are isomorphic
    exactly when g has an automorphism that fixes `fixed` pointwise and
    exchanges i with j. Pinning both targets in both copies is what keeps
    every query inside the promise: any isomorphism between the copies flips
    them wholesale (a fixed-point-free involution of the union), and no
    within-copy automorphism survives once the scan has ruled out the higher
    levels. A one-sided final label would leave such within-copy
    automorphisms alive, and those have fixed points.

    Final tail lengths are chosen to keep every gadget size distinct, to
    avoid mirroring the far chain arm (n+1 nodes) which would give a gadget
    an internal swap, and to land the doubled total in {2, 6, 10, ...}. All
    sizes are computed against the node count of g itself, not of the
    partially labeled copies.
    """
    if i == j:
        raise ValueError("need two distinct target nodes")
    fixed = [int(x) for x in fixed]
    targets = set(fixed)
    if len(targets) != len(fixed):
        raise ValueError("fixed nodes must be distinct")
    if i in targets or j in targets:
        raise ValueError("target nodes cannot be fixed")
    for node in [*fixed, i, j]:
        if not 1 <= node <= g.node_count:
            raise ValueError(f"node {node} out of range")

    n = g.node_count
    k = len(fixed)
    base_total = n + sum(2 * n + t + 3 for t in range(1, k + 1)) + 2 * (2 * n + 3) + (2 * k + 3)
    tails = None
    for ca in range(6):
        for cb in range(6):
            a, b = k + 1 + ca, k + 2 + cb
            if (base_total + ca + cb) % 2 == 1 and a != b and a != n + 1 and b != n + 1:
                tails = (a, b)
                break
        if tails:
            break

    def labeled_copy(a_node: int, b_node: int) -> Graph:
        h = g
        for t, node in enumerate(fixed, start=1):
            h = _attach_chain(h, node, 2 * n + 3, n + 2, t)
        h = _attach_chain(h, a_node, 2 * n + 3, n + 2, tails[0])
        return _attach_chain(h, b_node, 2 * n + 3, n + 2, tails[1])

    out = disjoint_union(labeled_copy(i, j), labeled_copy(j, i))
    if out.node_count % 4 != 2:
        raise AssertionError(f"padding failed: {out.node_count} nodes is not 2 mod 4")
    return out


def unique_ga_ff_oracle(g: Graph, node_limit: int = 4000) -> int:
    """Decide the promise problem, verifying the promise first.

    Returns 1 (YES) when the graph has its unique fixed-point-free involutive
    automorphism, 0 (NO) when it is rigid. Raises PromiseViolation whenever
    the input is outside the promise, so callers that are supposed to query
    only promise-satisfying graphs get caught immediately.
    """
    if not is_ff_degree(g.node_count):
        raise PromiseViolation(f"node count {g.node_count} is not 2 mod 4")
    auts = automorphisms(g, node_limit=node_limit)
    if len(auts) > 2:
        raise PromiseViolation(f"{len(auts)} automorphisms; the promise allows at most 2")
    if len(auts) == 2:
        pi = auts.nontrivial()[0]
        if not is_fpf_involution(pi):
            raise PromiseViolation("nontrivial automorphism is not a fixed-point-free involution")
        return 1
    return 0


def koebler_reduce(g: Graph, oracle=None) -> int:
    """Decide automorphism existence through promise-problem queries.

    Scans target pairs (i, j) with i from n down to 1 and j from i+1 up to n,
    querying the oracle on the corresponding two-copy gadget graph, and
    answers YES at the first YES. Disconnected inputs are replaced by their
    complement first: relabeling symmetries are identical for a graph and its
    complement, the complement of a disconnected graph is connected, and a
    disconnected base would hand the query copies spurious automorphisms.
    """
    if oracle is None:
        oracle = unique_ga_ff_oracle
    base = g
    if g.node_count > 1 and not is_connected(g):
        base = complement(g)
    n = base.node_count
    for i in range(n, 0, -1):
        for j in range(i + 1, n + 1):
            if oracle(build_query(base, list(range(1, i)), i, j)):
                return 1
    return 0


@dataclass
class PromiseInstance:
    """A promise-satisfying graph, optionally with a planted automorphism.

    With ``certified`` set, the planted permutation is checked cheaply and
    brute-force search is skipped; otherwise the full automorphism list is
    computed and the promise verified.
    """

    graph: Graph
    certified: Permutation | None = None
    node_limit: int = 4000
    _elements: tuple[Permutation, ...] | None = field(default=None, repr=False, compare=False)

    def aut_elements(self) -> tuple[Permutation, ...]:
        if self._elements is not None:
            return self._elements
        n = self.graph.node_count
        if not is_ff_degree(n):
            raise PromiseViolation(f"node count {n} is not 2 mod 4")
        if self.certified is not None:
            pi = self.certified
            if is_identity(pi):
                raise PromiseViolation("planted automorphism is trivial")
            if not is_fpf_involution(pi):
                raise PromiseViolation("planted automorphism is not a fixed-point-free involution")
            if apply_perm(pi, self.graph) != self.graph:
                raise PromiseViolation("planted permutation is not an automorphism")
            self._elements = (identity(n), pi)
        else:
            auts = automorphisms(self.graph, node_limit=self.node_limit)
            if len(auts) > 2:
                raise PromiseViolation(f"{len(auts)} automorphisms; the promise allows at most 2")
            if len(auts) == 2 and not is_fpf_involution(auts.nontrivial()[0]):
                raise PromiseViolation("nontrivial automorphism is not a fixed-point-free involution")
            self._elements = auts.elements
        return self._elements

    def is_yes(self) -> bool:
        return len(self.aut_elements()) == 2

    def hidden_key(self) -> Permutation | None:
        elements = self.aut_elements()
        return elements[1] if len(elements) == 2 else None


def coset_sample(inst: PromiseInstance, sign_mode: str, rng: np.random.Generator) -> PureSample:
    """One coset-superposition draw from a promise instance.

    Simulates preparing the uniform relabeling superposition entangled with
    the relabeled graph and discarding the graph register: the survivor is
    (1/sqrt(|Aut|)) sum over alpha in Aut(g) of |sigma alpha> for a uniform
    sigma. The minus variant flips the sign of odd-permutation amplitudes
    first. YES instances therefore yield plus/minus draws for the hidden
    key; NO instances yield iota draws either way.
    """
    if sign_mode not in (PLUS, MINUS):
        raise ValueError(f"sign mode must be {PLUS!r} or {MINUS!r}")
    elements = inst.aut_elements()
    n = inst.graph.node_count
    sigma = random_permutation(n, rng)
    scale = 1.0 / np.sqrt(len(elements))
    amps = {}
    for alpha in elements:
        perm = compose(sigma, alpha)
        amp = complex(scale)
        if sign_mode == MINUS and sign(perm):
            amp = -amp
        amps[(0, perm)] = amp
    state = SparseState(n, 1, amps)
    if inst.is_yes():
        key = inst.hidden_key()
        prov = Provenance.plus(key) if sign_mode == PLUS else Provenance.minus(key)
    else:
        prov = Provenance.iota()
    return PureSample(state, prov)
