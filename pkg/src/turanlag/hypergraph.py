"""r-uniform hypergraphs and the primitive operations everything else consumes.

Vertices are dense integer labels 0..n-1; isolated vertices are representable
(n may exceed the support of the edge set).  Edges are stored as sorted tuples
inside a frozenset, so membership tests are O(1) and every Hypergraph value is
immutable, hashable, and safe to share across threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

Edge = tuple[int, ...]
VertexSet = tuple[int, ...]

__all__ = [
    "Edge",
    "VertexSet",
    "Hypergraph",
    "Embedding",
    "DensityResult",
    "falling_factorial",
    "blowup",
    "contains_subhypergraph",
    "find_embedding",
    "max_matching",
    "kernel_degree",
    "max_average_degree",
]


def falling_factorial(m: int, r: int) -> int:
    """m(m-1)...(m-r+1); the empty product 1 when r = 0."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if m < r:
        raise ValueError(f"falling factorial needs m >= r, got m={m}, r={r}")
    out = 1
    for i in range(r):
        out *= m - i
    return out


def _as_edge(e: Iterable[int], r: int, n: int) -> Edge:
    t = tuple(sorted(e))
    if len(t) != r or len(set(t)) != len(t):
        raise ValueError(f"edge {t!r} must have exactly {r} distinct vertices")
    if t and (t[0] < 0 or t[-1] >= n):
        raise ValueError(f"edge {t!r} has vertices outside 0..{n - 1}")
    return t


@dataclass(frozen=True)
class Hypergraph:
    """Immutable r-uniform hypergraph on vertex labels 0..n-1.

    Any iterable of iterables is accepted for ``edges``; each edge is
    normalized to a sorted tuple and validated (exactly r distinct vertices,
    all in range).  Duplicate edges collapse silently, as sets do.
    """

    n: int
    r: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if self.r < 1:
            raise ValueError("uniformity must be at least 1")
        norm = frozenset(_as_edge(e, self.r, self.n) for e in self.edges)
        object.__setattr__(self, "edges", norm)

    # -- basic views ---------------------------------------------------

    @cached_property
    def edge_list(self) -> tuple[Edge, ...]:
        """Edges in sorted order (the canonical iteration order)."""
        return tuple(sorted(self.edges))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def covered_pairs(self) -> frozenset[tuple[int, int]]:
        """All pairs {u, v} contained together in some edge, as sorted tuples."""
        if self.r < 2:
            return frozenset()
        out = set()
        for e in self.edges:
            out.update(itertools.combinations(e, 2))
        return frozenset(out)

    def degree(self, S: Iterable[int] = ()) -> int:
        """Number of edges containing the vertex set S (d_G(S))."""
        ss = frozenset(S)
        if not ss:
            return len(self.edges)
        return sum(1 for e in self.edges if ss.issubset(e))

    # -- primitive operations ------------------------------------------

    def link(self, S: Iterable[int]) -> "Hypergraph":
        """Link of S: the (r-|S|)-graph {e - S : e in E, S subset of e}.

        Kept on the same vertex label space; its edge count is d_G(S).
        """
        ss = frozenset(S)
        if len(ss) >= self.r:
            raise ValueError(f"link needs |S| < r, got |S|={len(ss)}, r={self.r}")
        if any(v < 0 or v >= self.n for v in ss):
            raise ValueError("link set has out-of-range vertices")
        new_edges = [tuple(v for v in e if v not in ss) for e in self.edges if ss.issubset(e)]
        return Hypergraph(self.n, self.r - len(ss), new_edges)

    def shadow(self, p: int) -> frozenset[VertexSet]:
        """The p-shadow: all p-sets contained in some edge."""
        if not 1 <= p <= self.r:
            raise ValueError(f"shadow order must satisfy 1 <= p <= r, got {p}")
        out = set()
        for e in self.edges:
            out.update(itertools.combinations(e, p))
        return frozenset(out)

    def covers_pairs(self) -> bool:
        """True iff every pair of vertices lies in a common edge (vacuously for n <= 1)."""
        if self.n <= 1:
            return True
        return len(self.covered_pairs) == math.comb(self.n, 2)

    # -- structural helpers --------------------------------------------

    def induced(self, verts: Iterable[int], *, relabel: bool = False) -> "Hypergraph":
        """Subgraph of edges lying entirely inside ``verts``.

        With relabel=True the surviving vertices are renumbered 0..k-1 in
        ascending original order.
        """
        vs = sorted(set(verts))
        inside = set(vs)
        kept = [e for e in self.edges if inside.issuperset(e)]
        if not relabel:
            return Hypergraph(self.n, self.r, kept)
        pos = {v: i for i, v in enumerate(vs)}
        return Hypergraph(len(vs), self.r, [tuple(sorted(pos[v] for v in e)) for e in kept])

    def relabel(self, mapping) -> "Hypergraph":
        """Apply an injective relabeling (dict or sequence old -> new)."""
        if not isinstance(mapping, dict):
            mapping = {i: m for i, m in enumerate(mapping)}
        return Hypergraph(self.n, self.r, [tuple(sorted(mapping[v] for v in e)) for e in self.edges])

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.r, list(self.edges) + [tuple(e) for e in extra])

    def __repr__(self) -> str:  # compact, deterministic
        return f"Hypergraph(n={self.n}, r={self.r}, edges={len(self.edges)})"


def blowup(L: Hypergraph, sizes: Iterable[int]) -> Hypergraph:
    """Replace vertex i of L by a class of sizes[i] fresh vertices.

    Classes are consecutive blocks in input order; the edge set is the union
    over e in L of all transversals of e's classes, so the edge count is
    sum over e of prod(sizes[i] for i in e).
    """
    sizes = list(sizes)
    if len(sizes) != L.n:
        raise ValueError(f"need one class size per vertex of L ({L.n}), got {len(sizes)}")
    if any(s <= 0 for s in sizes):
        raise ValueError("class sizes must be positive")
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    classes = [range(offsets[i], offsets[i + 1]) for i in range(L.n)]
    edges = []
    for e in L.edges:
        for combo in itertools.product(*(classes[i] for i in e)):
            edges.append(tuple(sorted(combo)))
    return Hypergraph(offsets[-1], L.r, edges)


# -- containment -------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Injective vertex map certifying containment.

    kind='subgraph': the image of every pattern edge is a host edge.
    kind='family-member': ``core`` is a p-set of host vertices whose pairs are
    all covered in the host and whose induced subgraph contains the pattern;
    ``covering`` records one witness edge per core pair for auditability.
    """

    mapping: dict
    kind: str
    core: Optional[VertexSet] = None
    covering: Optional[dict] = None


def _embed_engine(
    n_host: int,
    host_edges: frozenset,
    host_deg,
    F: Hypergraph,
    allowed: Optional[Iterable[int]] = None,
    require_edge: Optional[Edge] = None,
) -> Optional[dict]:
    """Backtracking search for a (not necessarily induced) copy of F.

    Pattern vertices are explored in decreasing-degree-then-label order and
    host candidates in ascending order, so the first embedding found is
    deterministic.  ``allowed`` restricts host vertices; ``require_edge``
    forces some pattern edge to map onto exactly that host edge.
    """
    hosts = sorted(allowed) if allowed is not None else list(range(n_host))
    if F.n > len(hosts):
        return None
    degF = F.degrees
    fedges = F.edge_list

    def solve(order: list[int], seed: dict) -> Optional[dict]:
        # pattern edges checkable as soon as their last vertex (in order) is placed
        rank = {v: i for i, v in enumerate(order)}
        check_at: list[list[Edge]] = [[] for _ in order]
        for fe in fedges:
            check_at[max(rank[v] for v in fe)].append(fe)
        assign = dict(seed)
        used = set(seed.values())

        def ok_at(i: int) -> bool:
            for fe in check_at[i]:
                if tuple(sorted(assign[v] for v in fe)) not in host_edges:
                    return False
            return True

        start = len(seed)
        for i in range(start):
            if not ok_at(i):
                return None

        def rec(i: int) -> bool:
            if i == len(order):
                return True
            v = order[i]
            dv = degF[v]
            for h in hosts:
                if h in used or host_deg[h] < dv:
                    continue
                assign[v] = h
                used.add(h)
                if ok_at(i) and rec(i + 1):
                    return True
                used.discard(h)
                del assign[v]
            return False

        return dict(assign) if rec(start) else None

    base_order = sorted(range(F.n), key=lambda v: (-degF[v], v))
    if require_edge is None:
        return solve(base_order, {})
    req = tuple(sorted(require_edge))
    if req not in host_edges or len(req) != F.r:
        return None
    for fe in fedges:
        for perm in itertools.permutations(req):
            seed = dict(zip(fe, perm))
            order = list(fe) + [v for v in base_order if v not in seed]
            res = solve(order, seed)
            if res is not None:
                return res
    return None


def find_embedding(
    G: Hypergraph,
    F: Hypergraph,
    *,
    allowed: Optional[Iterable[int]] = None,
    require_edge: Optional[Edge] = None,
) -> Optional[dict]:
    """Raw mapping form of contains_subhypergraph (None when no copy exists)."""
    if F.r != G.r:
        raise ValueError(f"uniformity mismatch: pattern r={F.r}, host r={G.r}")
    return _embed_engine(G.n, G.edges, G.degrees, F, allowed, require_edge)


def contains_subhypergraph(G: Hypergraph, F: Hypergraph) -> Optional[Embedding]:
    """First (in fixed search order) copy of F in G, or None.

    Containment is not-necessarily-induced: every pattern edge must map onto a
    host edge, extra host edges are fine.
    """
    mapping = find_embedding(G, F)
    return None if mapping is None else Embedding(mapping, "subgraph")


# -- matching and sunflowers -------------------------------------------


def max_matching(G: Hypergraph) -> int:
    """Exact maximum number of pairwise disjoint edges, by branch and bound."""
    masks = []
    for e in G.edge_list:
        m = 0
        for v in e:
            m |= 1 << v
        masks.append(m)
    E = len(masks)
    if E == 0:
        return 0
    r, n = G.r, G.n
    best = 0

    def rec(i: int, used: int, count: int, free: int) -> None:
        nonlocal best
        if count > best:
            best = count
        cap = free // r
        for j in range(i, E):
            if count + min(E - j, cap) <= best:
                return
            mj = masks[j]
            if used & mj:
                continue
            rec(j + 1, used | mj, count + 1, free - r)

    rec(0, 0, 0, n)
    return best


def kernel_degree(G: Hypergraph, D: Iterable[int]) -> int:
    """Largest s such that s edges through D pairwise intersect exactly in D.

    Equals the maximum matching of the link of D (petals must be disjoint),
    and 0 when no edge contains D.
    """
    dd = tuple(sorted(set(D)))
    if len(dd) >= G.r:
        raise ValueError(f"kernel degree needs |D| < r, got |D|={len(dd)}, r={G.r}")
    lk = G.link(dd)
    if not lk.edges:
        return 0
    return max_matching(lk)


# -- max average degree (2-graphs) -------------------------------------


class DensityResult(NamedTuple):
    value: Fraction
    witness: VertexSet


def max_average_degree(G: Hypergraph, *, enumeration_limit: int = 20) -> DensityResult:
    """Exact d(G) = max over nonempty W of 2 e(G[W]) / |W|, for 2-graphs.

    Subset enumeration (with an incremental edge-count table) up to
    ``enumeration_limit`` vertices; beyond that, iterated exact max-flow
    separation with integer capacities.  Returns the value as a Fraction
    together with a maximizing vertex subset.
    """
    if G.r != 2:
        raise ValueError("max_average_degree is defined for 2-graphs")
    if G.n == 0:
        return DensityResult(Fraction(0), ())
    if not G.edges:
        return DensityResult(Fraction(0), (0,))
    if G.n <= enumeration_limit:
        return _mad_enumerate(G)
    return _mad_flow(G)


def _mad_enumerate(G: Hypergraph) -> DensityResult:
    n = G.n
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    size = 1 << n
    ecount = bytearray(size) if math.comb(n, 2) < 256 else [0] * size
    best_e, best_k, best_w = 0, 1, 1  # subset {0}
    for w in range(1, size):
        low = w & -w
        v = low.bit_length() - 1
        prev = w ^ low
        c = ecount[prev] + (adj[v] & prev).bit_count()
        ecount[w] = c
        k = w.bit_count()
        if c * best_k > best_e * k:
            best_e, best_k, best_w = c, k, w
    verts = tuple(i for i in range(n) if (best_w >> i) & 1)
    return DensityResult(Fraction(2 * best_e, best_k), verts)


def _mad_flow(G: Hypergraph) -> DensityResult:
    import networkx as nx

    n, m = G.n, len(G.edges)
    deg = G.degrees
    best = Fraction(m, n)  # density of the whole vertex set
    best_w = tuple(range(n))
    while True:
        a, b = best.numerator, best.denominator
        D = nx.DiGraph()
        for v in range(n):
            D.add_edge("s", v, capacity=m * b)
            D.add_edge(v, "t", capacity=m * b + 2 * a - deg[v] * b)
        for u, v in G.edge_list:
            D.add_edge(u, v, capacity=b)
            D.add_edge(v, u, capacity=b)
        cut, (S, _) = nx.minimum_cut(D, "s", "t")
        if cut >= n * m * b:
            break  # no subgraph strictly denser than a/b
        W = sorted(x for x in S if x != "s")
        wset = set(W)
        e_in = sum(1 for u, v in G.edges if u in wset and v in wset)
        cand = Fraction(e_in, len(W))
        if cand <= best:
            break
        best, best_w = cand, tuple(W)
    return DensityResult(2 * best, best_w)
