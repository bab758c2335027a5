"""Builders and recognizers for the named extremal configurations.

Multipartite Turan hypergraphs, generalized triangles and their three-edge
family, the cancellative condition, expanded cliques with an embedded pattern
(which subsume expanded cliques and fans), edge enlargements of 2-graphs, and
the family-membership certificate search.  A handful of small-graph generators
(paths, stars, brooms, random trees, random hypergraphs) round out the module
as conveniences for the CLI and the test corpora.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .hypergraph import (
    Edge,
    Embedding,
    Hypergraph,
    VertexSet,
    find_embedding,
)

__all__ = [
    "PartitionedHypergraph",
    "ExpandedClique",
    "turan_hypergraph",
    "generalized_triangle",
    "is_cancellative",
    "contains_sigma_member",
    "expanded_clique_with_embedded",
    "enlargement",
    "contains_family_member",
    "complete_hypergraph",
    "single_edge",
    "path_graph",
    "star_graph",
    "broom_graph",
    "random_tree",
    "random_hypergraph",
]


@dataclass(frozen=True)
class PartitionedHypergraph:
    """A hypergraph together with an explicit vertex partition."""

    graph: Hypergraph
    parts: tuple[VertexSet, ...]


def turan_hypergraph(n: int, r: int, num_parts: int) -> PartitionedHypergraph:
    """Complete num_parts-partite r-graph on n vertices, near-equal parts.

    Parts are consecutive blocks with sizes ceil(n/l) or floor(n/l), larger
    parts first; edges are exactly the r-sets meeting r distinct parts.
    """
    if r < 1:
        raise ValueError("uniformity must be at least 1")
    if num_parts < r:
        raise ValueError(f"need at least r={r} parts, got {num_parts}")
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    q, rem = divmod(n, num_parts)
    sizes = [q + 1] * rem + [q] * (num_parts - rem)
    parts: list[VertexSet] = []
    start = 0
    for s in sizes:
        parts.append(tuple(range(start, start + s)))
        start += s
    edges = []
    for pick in itertools.combinations(range(num_parts), r):
        for combo in itertools.product(*(parts[i] for i in pick)):
            edges.append(tuple(sorted(combo)))
    return PartitionedHypergraph(Hypergraph(n, r, edges), tuple(parts))


def generalized_triangle(r: int) -> Hypergraph:
    """The three-edge r-graph on 2r-1 vertices: two edges sharing r-1 vertices
    plus a third edge through their symmetric difference."""
    if r < 2:
        raise ValueError("generalized triangle needs r >= 2")
    e1 = tuple(range(r))
    e2 = tuple(range(r - 1)) + (r,)
    e3 = (r - 1,) + tuple(range(r, 2 * r - 1))
    return Hypergraph(2 * r - 1, r, [e1, e2, e3])


def _pair_index(G: Hypergraph) -> dict:
    idx: dict[tuple[int, int], list[Edge]] = {}
    for e in G.edge_list:
        for p in itertools.combinations(e, 2):
            idx.setdefault(p, []).append(e)
    return idx


def is_cancellative(G: Hypergraph) -> bool:
    """No three distinct edges where one contains the symmetric difference of
    the other two (equivalently: A u B = A u C forces B = C)."""
    if G.r < 2 or len(G.edges) < 3:
        return True
    pair_idx = _pair_index(G)
    edges = G.edge_list
    sets = [frozenset(e) for e in edges]
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            diff = sets[i] ^ sets[j]
            if len(diff) > G.r:
                continue
            d = sorted(diff)
            for c in pair_idx.get((d[0], d[1]), ()):
                if c != edges[i] and c != edges[j] and diff.issubset(c):
                    return False
    return True


def contains_sigma_member(G: Hypergraph) -> bool:
    """True iff some two edges share r-1 vertices and a third edge contains
    their symmetric difference (the three-edge triangle-like family)."""
    if G.r < 2:
        return False
    covered = G.covered_pairs
    buckets: dict[Edge, list[Edge]] = {}
    for e in G.edge_list:
        for s in itertools.combinations(e, G.r - 1):
            buckets.setdefault(s, []).append(e)
    for s, group in buckets.items():
        if len(group) < 2:
            continue
        ss = set(s)
        for a, b in itertools.combinations(group, 2):
            (x,) = set(a) - ss
            (y,) = set(b) - ss
            if (min(x, y), max(x, y)) in covered:
                return True
    return False


@dataclass(frozen=True)
class ExpandedClique:
    """Core of p vertices with an embedded pattern: every core pair not covered
    by the pattern receives a private padding edge through r-2 fresh vertices."""

    graph: Hypergraph
    core: VertexSet
    pads: dict  # (i, j) uncovered core pair -> tuple of r-2 fresh vertices


def expanded_clique_with_embedded(F: Hypergraph, p: int) -> ExpandedClique:
    """Build the expanded p-clique with embedded F.

    F occupies vertices 0..n(F)-1; vertices n(F)..p-1 complete the core.  Pads
    are allocated in lexicographic order of the uncovered pairs, consecutively
    after vertex p-1, so the construction is deterministic and round-trippable.
    """
    if F.r < 2:
        raise ValueError("expanded clique needs uniformity >= 2")
    if p < F.n:
        raise ValueError(f"core size p={p} must be at least n(F)={F.n}")
    covered = F.covered_pairs
    uncovered = [
        (i, j)
        for i, j in itertools.combinations(range(p), 2)
        if (i, j) not in covered
    ]
    edges = [tuple(e) for e in F.edge_list]
    pads: dict[tuple[int, int], VertexSet] = {}
    nxt = p
    for i, j in uncovered:
        pad = tuple(range(nxt, nxt + F.r - 2))
        nxt += F.r - 2
        pads[(i, j)] = pad
        edges.append(tuple(sorted((i, j) + pad)))
    return ExpandedClique(Hypergraph(nxt, F.r, edges), tuple(range(p)), pads)


def enlargement(T: Hypergraph, r_target: int) -> Hypergraph:
    """Append one fixed set of r_target-2 fresh vertices to every edge of a
    2-graph; r_target=2 returns T itself."""
    if T.r != 2:
        raise ValueError("enlargement starts from a 2-graph")
    if r_target < 2:
        raise ValueError("target uniformity must be at least 2")
    d = tuple(range(T.n, T.n + r_target - 2))
    return Hypergraph(T.n + r_target - 2, r_target, [e + d for e in T.edge_list])


def contains_family_member(G: Hypergraph, F: Hypergraph, p: int) -> Optional[Embedding]:
    """Certificate that G contains a member of the family of F-expansions:
    a p-set C whose pairs are all covered in G and with a copy of F inside
    G[C].  Returns None when no member exists.

    Search: p-cliques of the covered-pair graph are enumerated in ascending
    vertex order (that is the binding constraint), then F-embeddability inside
    the clique is tested.  The certificate records one covering edge per core
    pair, so coverage is auditable even though it is checked in the host.
    """
    if F.r != G.r:
        raise ValueError(f"uniformity mismatch: pattern r={F.r}, host r={G.r}")
    if p < F.n:
        raise ValueError(f"core size p={p} must be at least n(F)={F.n}")
    if p > G.n:
        return None

    n = G.n
    adj = [0] * n
    for u, v in G.covered_pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    first_cover: dict[tuple[int, int], Edge] = {}
    for e in G.edge_list:
        for pr in itertools.combinations(e, 2):
            first_cover.setdefault(pr, e)

    host_deg = G.degrees
    found: Optional[Embedding] = None

    def attempt(core: list[int]) -> Optional[Embedding]:
        mapping = _embed_in_core(core)
        if mapping is None:
            return None
        cs = tuple(sorted(core))
        covering = {pr: first_cover[pr] for pr in itertools.combinations(cs, 2)}
        return Embedding(mapping, "family-member", core=cs, covering=covering)

    def _embed_in_core(core: list[int]) -> Optional[dict]:
        return find_embedding(G, F, allowed=core)

    def extend(clique: list[int], cand: int) -> Optional[Embedding]:
        if len(clique) == p:
            return attempt(clique)
        need = p - len(clique)
        m = cand
        while m:
            if m.bit_count() < need:
                return None
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            res = extend(clique + [v], m & adj[v])
            if res is not None:
                return res
        return None

    full = (1 << n) - 1
    if p == 0:
        return attempt([])
    return extend([], full)


# -- small-graph generators (CLI and corpus conveniences) ---------------


def complete_hypergraph(m: int, r: int) -> Hypergraph:
    return Hypergraph(m, r, itertools.combinations(range(m), r))


def single_edge(r: int) -> Hypergraph:
    return Hypergraph(r, r, [tuple(range(r))])


def path_graph(k: int) -> Hypergraph:
    return Hypergraph(k, 2, [(i, i + 1) for i in range(k - 1)])


def star_graph(k: int) -> Hypergraph:
    return Hypergraph(k, 2, [(0, i) for i in range(1, k)])


def broom_graph(handle: int, leaves: int) -> Hypergraph:
    """Path on ``handle`` vertices with ``leaves`` extra leaves at its end."""
    if handle < 1:
        raise ValueError("handle must have at least one vertex")
    edges = [(i, i + 1) for i in range(handle - 1)]
    edges += [(handle - 1, handle + i) for i in range(leaves)]
    return Hypergraph(handle + leaves, 2, edges)


def random_tree(k: int, seed: int = 0) -> Hypergraph:
    """Uniform random labeled tree on k vertices (Prufer decode), seeded."""
    if k < 1:
        raise ValueError("tree needs at least one vertex")
    if k <= 2:
        return Hypergraph(k, 2, [(0, 1)] if k == 2 else [])
    rng = random.Random(seed)
    prufer = [rng.randrange(k) for _ in range(k - 2)]
    degree = [1] * k
    for v in prufer:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(k) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in prufer:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, w), max(u, w)))
    return Hypergraph(k, 2, edges)


def random_hypergraph(n: int, r: int, *, edge_count: Optional[int] = None,
                      density: Optional[float] = None, rng=None) -> Hypergraph:
    """Seeded random r-graph: either a fixed edge count (sampled without
    replacement) or independent edges at the given density."""
    if rng is None:
        rng = random.Random(0)
    elif isinstance(rng, int):
        rng = random.Random(rng)
    cands = list(itertools.combinations(range(n), r))
    if edge_count is not None:
        if edge_count > len(cands):
            raise ValueError("edge_count exceeds the number of possible edges")
        edges = rng.sample(cands, edge_count)
    elif density is not None:
        edges = [e for e in cands if rng.random() < density]
    else:
        raise ValueError("provide edge_count or density")
    return Hypergraph(n, r, edges)
