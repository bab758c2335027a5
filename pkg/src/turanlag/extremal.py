"""Exact small-n Turan search, heuristic lower bounds, and cleanup procedures.

The exact search is a DFS over the C(n, r) candidate edges in colex order,
include-branch first, keeping freeness incrementally: each predicate exposes a
can_add check that inspects only configurations through the new edge.  Pruning
is the plain counting bound (included + remaining <= best) plus one symmetry
pin: subtrees whose completions all leave vertex 0 isolated are skipped, since
any nonempty such graph is isomorphic to one with vertex 0 covered that the
search visits anyway.  The DFS is seeded with a heuristic incumbent so the
bound bites immediately.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Optional

from .hypergraph import (
    Edge,
    Embedding,
    Hypergraph,
    find_embedding,
    kernel_degree,
)
from .constructions import (
    contains_family_member,
    expanded_clique_with_embedded,
    turan_hypergraph,
)

__all__ = [
    "ForbiddenPredicate",
    "SubgraphPredicate",
    "FamilyPredicate",
    "SigmaPredicate",
    "CancellativePredicate",
    "SearchResult",
    "ExactSearchRefused",
    "EXACT_EDGE_CAP",
    "brute_force_ex",
    "local_search_lower",
    "kernel_clean",
    "family_free_subgraph",
    "FamilyFreeExtraction",
]

EXACT_EDGE_CAP = 64


class ExactSearchRefused(ValueError):
    """Raised when exact mode is requested beyond the candidate-edge cap."""


# -- predicates -----------------------------------------------------------


class ForbiddenPredicate:
    """Monotone forbidden-configuration predicate: if G violates it, every
    supergraph does.  ``state(n, r)`` builds the incremental index used by the
    searches; ``is_free`` is the standalone check."""

    kind = "abstract"

    def is_free(self, G: Hypergraph) -> bool:
        raise NotImplementedError

    def state(self, n: int, r: int):
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind


class _EdgeSetState:
    """Shared bookkeeping: current edge tuples and a Hypergraph builder."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.current: set[Edge] = set()

    def graph(self) -> Hypergraph:
        return Hypergraph(self.n, self.r, self.current)

    def add(self, e: Edge) -> None:
        self.current.add(e)

    def remove(self, e: Edge) -> None:
        self.current.discard(e)


class SubgraphPredicate(ForbiddenPredicate):
    kind = "subgraph"

    def __init__(self, pattern: Hypergraph):
        if len(pattern.edges) == 0 and pattern.n == 0:
            raise ValueError("empty pattern forbids nothing")
        self.pattern = pattern

    def is_free(self, G: Hypergraph) -> bool:
        return find_embedding(G, self.pattern) is None

    def state(self, n: int, r: int):
        if r != self.pattern.r:
            raise ValueError("predicate uniformity mismatch")
        t = _complete_two_graph_order(self.pattern)
        if t is not None:
            return _CliqueState(n, t)
        return _GenericSubgraphState(n, self.pattern)

    def describe(self) -> str:
        return f"subgraph(n={self.pattern.n},r={self.pattern.r},e={len(self.pattern.edges)})"


def _complete_two_graph_order(F: Hypergraph) -> Optional[int]:
    """t when F is exactly a complete 2-graph K_t without isolated vertices."""
    if F.r != 2 or F.n < 2:
        return None
    if any(d == 0 for d in F.degrees):
        return None
    return F.n if len(F.edges) == math.comb(F.n, 2) else None


class _CliqueState(_EdgeSetState):
    """Fast path for forbidding K_t in 2-graphs."""

    def __init__(self, n: int, t: int):
        super().__init__(n, 2)
        self.t = t
        self.adj = [0] * n

    def can_add(self, e: Edge) -> bool:
        u, v = e
        common = self.adj[u] & self.adj[v]
        if self.t == 3:
            return common == 0
        return not self._has_clique(common, self.t - 2)

    def _has_clique(self, mask: int, size: int) -> bool:
        if size == 0:
            return True
        m = mask
        while m:
            low = m & -m
            w = low.bit_length() - 1
            m ^= low
            if self._has_clique(m & self.adj[w], size - 1):
                return True
        return False

    def add(self, e: Edge) -> None:
        super().add(e)
        u, v = e
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def remove(self, e: Edge) -> None:
        super().remove(e)
        u, v = e
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)


class _GenericSubgraphState(_EdgeSetState):
    def __init__(self, n: int, pattern: Hypergraph):
        super().__init__(n, pattern.r)
        self.pattern = pattern

    def can_add(self, e: Edge) -> bool:
        H = Hypergraph(self.n, self.r, list(self.current) + [e])
        return find_embedding(H, self.pattern, require_edge=e) is None


class FamilyPredicate(ForbiddenPredicate):
    kind = "family"

    def __init__(self, pattern: Hypergraph, p: int):
        if p < pattern.n:
            raise ValueError("core size must be at least n(F)")
        self.pattern = pattern
        self.p = p

    def is_free(self, G: Hypergraph) -> bool:
        return contains_family_member(G, self.pattern, self.p) is None

    def state(self, n: int, r: int):
        if r != self.pattern.r:
            raise ValueError("predicate uniformity mismatch")
        return _FamilyState(n, self.pattern, self.p)

    def describe(self) -> str:
        return f"family(p={self.p},n(F)={self.pattern.n},r={self.pattern.r})"


class _FamilyState(_EdgeSetState):
    def __init__(self, n: int, pattern: Hypergraph, p: int):
        super().__init__(n, pattern.r)
        self.pattern = pattern
        self.p = p

    def can_add(self, e: Edge) -> bool:
        H = Hypergraph(self.n, self.r, list(self.current) + [e])
        return contains_family_member(H, self.pattern, self.p) is None


class SigmaPredicate(ForbiddenPredicate):
    """Forbid the three-edge family: D1, D2 sharing r-1 vertices with their
    symmetric difference inside a third edge."""

    kind = "sigma"

    def __init__(self, r: int):
        if r < 2:
            raise ValueError("sigma family needs r >= 2")
        self.r = r

    def is_free(self, G: Hypergraph) -> bool:
        from .constructions import contains_sigma_member

        return not contains_sigma_member(G)

    def state(self, n: int, r: int):
        if r != self.r:
            raise ValueError("predicate uniformity mismatch")
        return _SigmaState(n, r)

    def describe(self) -> str:
        return f"sigma(r={self.r})"


class _SigmaState:
    """Bitmask indices for the incremental sigma check.

    A new edge e participates either as one of the (r-1)-sharing pair (scan
    the (r-1)-subset buckets, then ask whether the symmetric-difference pair
    is covered) or as the containing third edge (for each pair {a, b} in e,
    look for an edge A through a avoiding b with (A - a) + b also present).
    """

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.current: set[Edge] = set()
        self.mask_set: set[int] = set()
        self.sub_buckets: dict[int, set[int]] = {}
        self.pair_count: dict[int, int] = {}
        self.vertex_edges: dict[int, set[int]] = {v: set() for v in range(n)}
        self._prep: dict[Edge, tuple] = {}

    def _prepare(self, e: Edge):
        got = self._prep.get(e)
        if got is None:
            em = 0
            for v in e:
                em |= 1 << v
            subs = tuple(em & ~(1 << v) for v in e)  # the r (r-1)-subset masks
            pairs = tuple(
                (1 << a, 1 << b, (1 << a) | (1 << b))
                for a, b in itertools.combinations(e, 2)
            )
            got = (em, subs, pairs)
            self._prep[e] = got
        return got

    def can_add(self, e: Edge) -> bool:
        em, subs, pairs = self._prepare(e)
        pair_count = self.pair_count
        # e as one of the sharing pair
        for s in subs:
            bucket = self.sub_buckets.get(s)
            if not bucket:
                continue
            for bm in bucket:
                if pair_count.get(em ^ bm, 0):
                    return False
        # e as the containing edge
        mask_set = self.mask_set
        for abit, bbit, _ in pairs:
            a = abit.bit_length() - 1
            for am in self.vertex_edges[a]:
                if am & bbit:
                    continue
                if (am ^ abit) | bbit in mask_set:
                    return False
        return True

    def add(self, e: Edge) -> None:
        em, subs, pairs = self._prepare(e)
        self.current.add(e)
        self.mask_set.add(em)
        for s in subs:
            self.sub_buckets.setdefault(s, set()).add(em)
        for _, _, pm in pairs:
            self.pair_count[pm] = self.pair_count.get(pm, 0) + 1
        for v in e:
            self.vertex_edges[v].add(em)

    def remove(self, e: Edge) -> None:
        em, subs, pairs = self._prepare(e)
        self.current.discard(e)
        self.mask_set.discard(em)
        for s in subs:
            self.sub_buckets[s].discard(em)
        for _, _, pm in pairs:
            self.pair_count[pm] -= 1
        for v in e:
            self.vertex_edges[v].discard(em)

    def graph(self) -> Hypergraph:
        return Hypergraph(self.n, self.r, self.current)


class CancellativePredicate(ForbiddenPredicate):
    """Forbid three distinct edges where one contains the symmetric difference
    of the other two."""

    kind = "cancellative"

    def is_free(self, G: Hypergraph) -> bool:
        from .constructions import is_cancellative

        return is_cancellative(G)

    def state(self, n: int, r: int):
        # for r <= 3 a violation forces |A ^ B| = 2, i.e. an (r-1)-sharing
        # pair, so the sigma index decides exactly the same predicate
        if r <= 3:
            return _SigmaState(n, r)
        return _CancellativeState(n, r)

    def describe(self) -> str:
        return "cancellative"


class _CancellativeState:
    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.current: set[Edge] = set()
        self.masks: list[int] = []
        self.subset_count: dict[int, int] = {}
        self.diff_count: dict[int, int] = {}
        self._prep: dict[Edge, tuple] = {}

    def _prepare(self, e: Edge):
        got = self._prep.get(e)
        if got is None:
            em = 0
            for v in e:
                em |= 1 << v
            subs = []
            for k in range(2, self.r + 1):
                for sub in itertools.combinations(e, k):
                    m = 0
                    for v in sub:
                        m |= 1 << v
                    subs.append(m)
            diff_sizes = [k for k in range(2, self.r + 1, 2)]
            diffs = []
            for k in diff_sizes:
                for sub in itertools.combinations(e, k):
                    m = 0
                    for v in sub:
                        m |= 1 << v
                    diffs.append(m)
            got = (em, tuple(subs), tuple(diffs))
            self._prep[e] = got
        return got

    def can_add(self, e: Edge) -> bool:
        em, _, diffs = self._prepare(e)
        r = self.r
        subset_count = self.subset_count
        # e as one of the differing pair: some third edge contains e ^ B
        for bm in self.masks:
            d = em ^ bm
            if d.bit_count() <= r and subset_count.get(d, 0):
                return False
        # e as the containing edge: some stored pairwise difference sits in e
        diff_count = self.diff_count
        for d in diffs:
            if diff_count.get(d, 0):
                return False
        return True

    def add(self, e: Edge) -> None:
        em, subs, _ = self._prepare(e)
        r = self.r
        for bm in self.masks:
            d = em ^ bm
            if d.bit_count() <= r:
                self.diff_count[d] = self.diff_count.get(d, 0) + 1
        self.current.add(e)
        self.masks.append(em)
        for s in subs:
            self.subset_count[s] = self.subset_count.get(s, 0) + 1

    def remove(self, e: Edge) -> None:
        em, subs, _ = self._prepare(e)
        self.current.discard(e)
        self.masks.remove(em)
        for bm in self.masks:
            d = em ^ bm
            if d.bit_count() <= self.r:
                self.diff_count[d] -= 1
        for s in subs:
            self.subset_count[s] -= 1

    def graph(self) -> Hypergraph:
        return Hypergraph(self.n, self.r, self.current)


# -- search results ---------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: Hypergraph
    exact: bool
    nodes_explored: int
    elapsed: float


def _colex_candidates(n: int, r: int) -> list[Edge]:
    return sorted(itertools.combinations(range(n), r), key=lambda e: e[::-1])


def brute_force_ex(n: int, r: int, forbidden: ForbiddenPredicate, *,
                   max_nodes: Optional[int] = None,
                   max_seconds: Optional[float] = None,
                   presearch_iters: int = 400,
                   seed: int = 0) -> SearchResult:
    """Exact maximum edge count of a predicate-free r-graph on n vertices.

    Exhausts the 2^C(n,r) subset tree with incremental freeness checks; refuses
    when C(n, r) exceeds the hard cap.  Node/time budgets make the result a
    best-so-far bound with exact=False instead of exhausting.
    """
    m = math.comb(n, r)
    if m > EXACT_EDGE_CAP:
        raise ExactSearchRefused(
            f"C({n},{r}) = {m} exceeds the exact-mode cap of {EXACT_EDGE_CAP}; "
            "use local_search_lower (--heuristic) for a lower bound"
        )
    t0 = time.perf_counter()
    cands = _colex_candidates(n, r)
    if not forbidden.is_free(Hypergraph(n, r, [])):
        raise ValueError("no predicate-free graph exists on this vertex count")

    # heuristic incumbent so the counting bound prunes from the start
    inc = local_search_lower(n, r, forbidden, seed=seed, iters=presearch_iters)
    best = inc.value
    best_edges = set(inc.witness.edges)

    state = forbidden.state(n, r)
    zero_suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        zero_suffix[i] = zero_suffix[i + 1] + (0 in cands[i])

    nodes = 0
    aborted = False
    deadline = None if max_seconds is None else t0 + max_seconds
    can_add, s_add, s_remove = state.can_add, state.add, state.remove

    def dfs(i: int, count: int, has_zero: bool) -> None:
        nonlocal nodes, best, best_edges, aborted
        nodes += 1
        if aborted:
            return
        if max_nodes is not None and nodes > max_nodes:
            aborted = True
            return
        if deadline is not None and nodes % 4096 == 0 and time.perf_counter() > deadline:
            aborted = True
            return
        if count > best:
            best = count
            best_edges = set(state.current)
        if i == m:
            return
        if count + (m - i) <= best:
            return
        if not has_zero and zero_suffix[i] == 0:
            return  # completions leave vertex 0 isolated: isomorphs are visited elsewhere
        e = cands[i]
        if can_add(e):
            s_add(e)
            dfs(i + 1, count + 1, has_zero or e[0] == 0)
            s_remove(e)
        if not aborted:
            dfs(i + 1, count, has_zero)

    dfs(0, 0, False)
    elapsed = time.perf_counter() - t0
    return SearchResult(best, Hypergraph(n, r, best_edges), not aborted,
                        nodes, elapsed)


def local_search_lower(n: int, r: int, forbidden: ForbiddenPredicate, *,
                       seed: int = 0, iters: int = 2000) -> SearchResult:
    """Randomized add/remove/refill hill climb; value <= ex(n, predicate).

    Seeds: the empty graph and every predicate-free balanced multipartite
    graph with between r and n parts.  iters=0 returns the best seed as-is.
    """
    t0 = time.perf_counter()
    rng = random.Random(seed)
    best_graph = Hypergraph(n, r, [])
    if not forbidden.is_free(best_graph):
        # possible only for edgeless patterns fitting inside n vertices
        raise ValueError("no predicate-free graph exists on this vertex count")
    for parts in range(r, n + 1):
        T = turan_hypergraph(n, r, parts).graph
        if len(T.edges) > len(best_graph.edges) and forbidden.is_free(T):
            best_graph = T
    if iters == 0:
        return SearchResult(len(best_graph.edges), best_graph, False, 0,
                            time.perf_counter() - t0)

    cands = _colex_candidates(n, r)
    state = forbidden.state(n, r)
    current: set[Edge] = set()
    for e in best_graph.edge_list:
        state.add(e)
        current.add(e)
    best = len(current)
    best_set = set(current)

    def greedy_fill(order) -> None:
        for e in order:
            if e not in current and state.can_add(e):
                state.add(e)
                current.add(e)

    for _ in range(iters):
        if current and rng.random() < 0.35:
            drop = rng.sample(sorted(current), min(1 + (rng.random() < 0.3),
                                                   len(current)))
            for e in drop:
                state.remove(e)
                current.discard(e)
        greedy_fill(rng.sample(cands, len(cands)))
        if len(current) > best:
            best = len(current)
            best_set = set(current)
    return SearchResult(best, Hypergraph(n, r, best_set), False, iters,
                        time.perf_counter() - t0)


# -- cleanup procedures ------------------------------------------------------


def kernel_clean(G: Hypergraph, p: int, d: int) -> Hypergraph:
    """While some d-set has nonzero degree at most p * C(n, r-d-1), drop all
    edges through it.

    Afterwards every d-set with nonzero degree supports more than p pairwise
    disjoint petals (its kernel degree exceeds p), and the total loss is at
    most p * C(n, d) * C(n, r-d-1) edges.  Idempotent.
    """
    if not 0 < d < G.r:
        raise ValueError(f"need 0 < d < r, got d={d}, r={G.r}")
    threshold = p * math.comb(G.n, G.r - d - 1)
    edges = set(G.edges)
    changed = True
    while changed:
        changed = False
        for D in itertools.combinations(range(G.n), d):
            ds = set(D)
            hits = [e for e in edges if ds.issubset(e)]
            if hits and len(hits) <= threshold:
                edges.difference_update(hits)
                changed = True
    return Hypergraph(G.n, G.r, edges)


@dataclass(frozen=True)
class FamilyFreeExtraction:
    graph: Hypergraph
    violation: Optional[Embedding]  # family member found post-hoc, if any
    checked: bool                   # whether the post-hoc check ran


def family_free_subgraph(G: Hypergraph, F: Hypergraph, m: int, *,
                         check_limit: int = 10) -> FamilyFreeExtraction:
    """Pair cleanup at the expansion threshold: when G contains no copy of the
    expanded clique itself, the output contains no member of its whole family.

    Applies kernel_clean with d=2 and p = vertex count of the expanded
    (m+1)-clique with embedded F; below check_limit vertices the family check
    runs post-hoc and a found member (precondition violation upstream) is
    returned as a diagnostic rather than raising.
    """
    if G.r < 3:
        raise ValueError("pair cleanup needs uniformity >= 3")
    if F.r != G.r:
        raise ValueError("uniformity mismatch")
    p = expanded_clique_with_embedded(F, m + 1).graph.n
    cleaned = kernel_clean(G, p, 2)
    if cleaned.n <= check_limit:
        violation = contains_family_member(cleaned, F, m + 1)
        return FamilyFreeExtraction(cleaned, violation, True)
    return FamilyFreeExtraction(cleaned, None, False)
