"""Link-equality classes, vertex cloning, and the two symmetrization drivers.

Two vertices are equivalent when their links coincide (equivalent vertices are
automatically nonadjacent).  Symmetrizing v to u replaces v's edges with
clones of u's link, which merges v's class into u's, so the plain driver
terminates: the class count strictly decreases each round.  The cleaning
driver interleaves the same rounds with minimum-degree vertex deletion until
the graph is dense at the given threshold, with one exception rule: when the
minimum-degree vertex sits in the class that just received clones, a donor is
deleted instead (while any remain).

Every run returns a replayable trace; replaying a trace against the input
reproduces the output bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .hypergraph import Hypergraph, VertexSet, blowup

__all__ = [
    "SymmetrizationStep",
    "SymmetrizationTrace",
    "SymmetrizationOutcome",
    "CoreRepresentatives",
    "equivalence_classes",
    "symmetrize",
    "core_representatives",
    "is_alpha_dense",
    "run_plain",
    "run_with_cleaning",
    "replay_trace",
    "intermediate_graphs",
    "is_blowup_of_quotient",
]


@dataclass(frozen=True)
class SymmetrizationStep:
    kind: str                     # "symmetrize" | "clean"
    donor_class: tuple[int, ...]  # class whose members were cloned (empty for clean)
    target: int                   # receiving vertex (-1 for clean steps)
    removed: tuple[int, ...]      # vertices deleted this round (empty for symmetrize)
    edges_before: int
    edges_after: int
    flagged: bool = False         # exception rule wanted a donor, but all were gone

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "donor_class": list(self.donor_class),
            "target": self.target,
            "removed": list(self.removed),
            "edges_before": self.edges_before,
            "edges_after": self.edges_after,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class SymmetrizationTrace:
    steps: tuple[SymmetrizationStep, ...] = ()

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps]}


@dataclass(frozen=True)
class SymmetrizationOutcome:
    result: Hypergraph       # compacted onto the surviving vertices
    trace: SymmetrizationTrace
    kept: tuple[int, ...]    # surviving original labels, ascending


# -- equivalence classes -------------------------------------------------


def _links(edges: set, alive: Iterable[int]) -> dict:
    lk: dict[int, set] = {v: set() for v in alive}
    for e in edges:
        for v in e:
            lk[v].add(e - {v})
    return {v: frozenset(s) for v, s in lk.items()}


def equivalence_classes(G: Hypergraph) -> list[VertexSet]:
    """Partition of the vertices into classes of identical links, sorted by
    smallest member."""
    edges = {frozenset(e) for e in G.edges}
    links = _links(edges, range(G.n))
    groups: dict = {}
    for v in range(G.n):
        groups.setdefault(links[v], []).append(v)
    return sorted((tuple(sorted(g)) for g in groups.values()), key=lambda c: c[0])


def symmetrize(G: Hypergraph, v: int, u: int) -> Hypergraph:
    """Make v a clone of u: drop v's edges, add {v} + D for D in the link of u.

    Requires {u, v} uncovered; edges through both u and v never arise because
    u's link avoids v by nonadjacency.
    """
    if u == v:
        raise ValueError("symmetrize needs two distinct vertices")
    for w in (u, v):
        if not 0 <= w < G.n:
            raise ValueError(f"vertex {w} out of range")
    if (min(u, v), max(u, v)) in G.covered_pairs:
        raise ValueError(f"cannot symmetrize covered pair {{{u}, {v}}}")
    edges = {frozenset(e) for e in G.edges if v not in e}
    link_u = [frozenset(e) - {u} for e in G.edges if u in e]
    for d in link_u:
        edges.add(d | {v})
    return Hypergraph(G.n, G.r, [tuple(sorted(e)) for e in edges])


class CoreRepresentatives(NamedTuple):
    S: VertexSet
    quotient: Hypergraph
    sizes: tuple[int, ...]


def core_representatives(G: Hypergraph) -> CoreRepresentatives:
    """Smallest-label representative per class, the induced graph on them
    relabeled 0..|S|-1, and the class sizes aligned with S."""
    classes = equivalence_classes(G)
    S = tuple(c[0] for c in classes)
    pos = {s: i for i, s in enumerate(S)}
    sset = set(S)
    q_edges = [tuple(sorted(pos[v] for v in e)) for e in G.edges if sset.issuperset(e)]
    return CoreRepresentatives(S, Hypergraph(len(S), G.r, q_edges),
                               tuple(len(c) for c in classes))


def is_blowup_of_quotient(G: Hypergraph) -> bool:
    """Check the fixed-point contract: relabeling classes onto consecutive
    blocks turns G into exactly the blowup of its representative quotient."""
    classes = equivalence_classes(G)
    reps = core_representatives(G)
    mapping = {}
    nxt = 0
    for cls in classes:
        for v in cls:
            mapping[v] = nxt
            nxt += 1
    return blowup(reps.quotient, reps.sizes).edges == G.relabel(mapping).edges


# -- density threshold ---------------------------------------------------


def _as_fraction(alpha: Union[Fraction, float, int, str]) -> Fraction:
    if isinstance(alpha, str):
        return Fraction(alpha)
    return Fraction(alpha)


def is_alpha_dense(G: Hypergraph, alpha) -> bool:
    """Minimum degree at least alpha * C(n-1, r-1), compared exactly.

    Vacuously true when n < r (the threshold is zero) and for n = 0.
    """
    af = _as_fraction(alpha)
    if G.n == 0:
        return True
    dmin = min(G.degrees)
    return Fraction(dmin) >= af * math.comb(G.n - 1, G.r - 1)


def _dense(edges: set, alive: set, r: int, af: Fraction) -> bool:
    n = len(alive)
    if n == 0:
        return False  # caller treats empty separately
    deg = {v: 0 for v in alive}
    for e in edges:
        for v in e:
            deg[v] += 1
    return Fraction(min(deg.values())) >= af * math.comb(n - 1, r - 1)


# -- drivers --------------------------------------------------------------


def _select_pair(edges: set, alive: set):
    """Deterministic choice of a nonadjacent nonequivalent pair (u, v) with
    d(u) >= d(v): maximize d(u), then smallest u, then smallest v."""
    links = _links(edges, alive)
    deg = {v: len(links[v]) for v in alive}
    covered = set()
    for e in edges:
        es = sorted(e)
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                covered.add((es[i], es[j]))
    for u in sorted(alive, key=lambda t: (-deg[t], t)):
        for v in sorted(alive):
            if v == u or deg[v] > deg[u]:
                continue
            if (min(u, v), max(u, v)) in covered:
                continue
            if links[u] == links[v]:
                continue
            return u, v, links
    return None


def _clone_class(edges: set, donors: Iterable[int], link_u: frozenset) -> set:
    out = {e for e in edges if not any(w in e for w in donors)}
    for w in donors:
        for d in link_u:
            out.add(d | {w})
    return out


def _compact(edges: set, alive: set, n: int, r: int) -> tuple[Hypergraph, tuple[int, ...]]:
    kept = tuple(sorted(alive))
    pos = {v: i for i, v in enumerate(kept)}
    remapped = [tuple(sorted(pos[v] for v in e)) for e in edges]
    return Hypergraph(len(kept), r, remapped), kept


def run_plain(G: Hypergraph) -> SymmetrizationOutcome:
    """Repeat: pick a nonadjacent nonequivalent pair (u, v) with d(u) >= d(v)
    and clone v's whole class to u, until no such pair remains.

    At the fixed point the representative quotient covers pairs and the graph
    is a blowup of it; the edge count never decreases.
    """
    edges = {frozenset(e) for e in G.edges}
    alive = set(range(G.n))
    steps: list[SymmetrizationStep] = []
    for _ in range(G.n + 1):
        sel = _select_pair(edges, alive)
        if sel is None:
            break
        u, v, links = sel
        donors = tuple(sorted(w for w in alive if links[w] == links[v]))
        before = len(edges)
        edges = _clone_class(edges, donors, links[u])
        steps.append(SymmetrizationStep("symmetrize", donors, u, (),
                                        before, len(edges)))
    result = Hypergraph(G.n, G.r, [tuple(sorted(e)) for e in edges])
    return SymmetrizationOutcome(result, SymmetrizationTrace(tuple(steps)),
                                 tuple(range(G.n)))


def run_with_cleaning(G: Hypergraph, alpha) -> SymmetrizationOutcome:
    """Symmetrization rounds interleaved with minimum-degree cleaning.

    After each cloning round, while the surviving graph is below the density
    threshold, delete the minimum-degree vertex (ties by label) -- except that
    when that vertex sits in the class that received the clones, the
    smallest surviving donor is deleted instead; rounds where the exception
    fired with no donors left are flagged.  The output is empty or dense at
    the threshold.  alpha = 0 never cleans and reproduces the plain driver.
    """
    af = _as_fraction(alpha)
    if not 0 <= af <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    edges = {frozenset(e) for e in G.edges}
    alive = set(range(G.n))
    steps: list[SymmetrizationStep] = []
    while alive:
        sel = _select_pair(edges, alive)
        if sel is None:
            if _dense(edges, alive, G.r, af):
                break
            # sparse fixed point (possible only before any round has cleaned):
            # plain minimum-degree cleaning so the empty-or-dense contract holds
            removed0: list[int] = []
            before0 = len(edges)
            while alive and not _dense(edges, alive, G.r, af):
                deg = {w: 0 for w in alive}
                for e in edges:
                    for w in e:
                        deg[w] += 1
                z = min(alive, key=lambda t: (deg[t], t))
                alive.discard(z)
                edges = {e for e in edges if z not in e}
                removed0.append(z)
            steps.append(SymmetrizationStep("clean", (), -1,
                                            tuple(sorted(removed0)),
                                            before0, len(edges)))
            continue
        u, v, links = sel
        donors = tuple(sorted(w for w in alive if links[w] == links[v]))
        protected = {w for w in alive if links[w] == links[u]}
        before = len(edges)
        edges = _clone_class(edges, donors, links[u])
        steps.append(SymmetrizationStep("symmetrize", donors, u, (),
                                        before, len(edges)))
        removed: list[int] = []
        flagged = False
        before_clean = len(edges)
        while alive and not _dense(edges, alive, G.r, af):
            deg = {w: 0 for w in alive}
            for e in edges:
                for w in e:
                    deg[w] += 1
            z = min(alive, key=lambda t: (deg[t], t))
            victim = z
            if z in protected:
                live_donors = [w for w in donors if w in alive]
                if live_donors:
                    victim = live_donors[0]
                else:
                    flagged = True
            alive.discard(victim)
            edges = {e for e in edges if victim not in e}
            removed.append(victim)
        if removed:
            steps.append(SymmetrizationStep("clean", (), -1,
                                            tuple(sorted(removed)),
                                            before_clean, len(edges), flagged))
    result, kept = _compact(edges, alive, G.n, G.r)
    return SymmetrizationOutcome(result, SymmetrizationTrace(tuple(steps)), kept)


# -- trace replay ----------------------------------------------------------


def _apply_step(edges: set, alive: set, step: SymmetrizationStep) -> set:
    if step.kind == "symmetrize":
        link_u = frozenset(e - {step.target} for e in edges if step.target in e)
        return _clone_class(edges, step.donor_class, link_u)
    for z in step.removed:
        alive.discard(z)
    zs = set(step.removed)
    return {e for e in edges if not (e & zs)}


def replay_trace(G: Hypergraph, trace: SymmetrizationTrace) -> SymmetrizationOutcome:
    """Mechanically apply recorded steps to the input; reproduces the original
    run's output exactly."""
    edges = {frozenset(e) for e in G.edges}
    alive = set(range(G.n))
    for step in trace.steps:
        edges = _apply_step(edges, alive, step)
    result, kept = _compact(edges, alive, G.n, G.r)
    return SymmetrizationOutcome(result, trace, kept)


def intermediate_graphs(G: Hypergraph, trace: SymmetrizationTrace):
    """Yield the graph after each recorded step, on the original label space
    (deleted vertices simply lose their edges)."""
    edges = {frozenset(e) for e in G.edges}
    alive = set(range(G.n))
    for step in trace.steps:
        edges = _apply_step(edges, alive, step)
        yield Hypergraph(G.n, G.r, [tuple(sorted(e)) for e in edges])
