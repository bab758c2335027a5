"""Shared brute-force oracles for the test suite.

These deliberately re-derive answers by exhaustive enumeration, independent of
the library's search strategies, so the two routes cross-check each other.
"""

from __future__ import annotations

import itertools

import pytest

from turanlag import Hypergraph


def brute_contains(G: Hypergraph, F: Hypergraph) -> bool:
    """Exhaustive containment: try every injective map of F's vertices."""
    if F.r != G.r or F.n > G.n:
        return False
    fedges = F.edge_list
    for image in itertools.permutations(range(G.n), F.n):
        if all(tuple(sorted(image[v] for v in e)) in G.edges for e in fedges):
            return True
    return False


def brute_family(G: Hypergraph, F: Hypergraph, p: int) -> bool:
    """Exhaustive family membership: every p-subset as a candidate core."""
    if p > G.n:
        return False
    covered = G.covered_pairs
    for core in itertools.combinations(range(G.n), p):
        if any(pr not in covered for pr in itertools.combinations(core, 2)):
            continue
        induced = G.induced(core)
        if F.n == 0 or brute_contains_in(induced, F, core):
            return True
    return False


def brute_contains_in(G: Hypergraph, F: Hypergraph, allowed) -> bool:
    allowed = tuple(allowed)
    if F.n > len(allowed):
        return False
    fedges = F.edge_list
    for image in itertools.permutations(allowed, F.n):
        if all(tuple(sorted(image[v] for v in e)) in G.edges for e in fedges):
            return True
    return False


def brute_matching(G: Hypergraph) -> int:
    """Maximum matching by checking all edge subsets."""
    edges = G.edge_list
    best = 0
    for k in range(len(edges), 0, -1):
        if k <= best:
            break
        for combo in itertools.combinations(edges, k):
            seen: set[int] = set()
            ok = True
            for e in combo:
                if any(v in seen for v in e):
                    ok = False
                    break
                seen.update(e)
            if ok:
                best = max(best, k)
                break
    return best


def brute_is_cancellative(G: Hypergraph) -> bool:
    for a, b, c in itertools.permutations(G.edge_list, 3):
        if (set(a) ^ set(b)).issubset(c):
            return False
    return True


@pytest.fixture
def t363() -> Hypergraph:
    """T_3(6,3) built directly from its parts, bypassing the library builder."""
    parts = [(0, 1), (2, 3), (4, 5)]
    edges = [tuple(sorted(c)) for c in itertools.product(*parts)]
    return Hypergraph(6, 3, edges)
