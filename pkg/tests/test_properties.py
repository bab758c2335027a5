"""Randomized invariants, hypothesis-driven.

Each property states a contract from the operation definitions; the generators
stay small so every example runs an exhaustive oracle where one is used.
"""

import itertools
import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from turanlag import (
    Hypergraph,
    blowup,
    contains_family_member,
    contains_subhypergraph,
    equivalence_classes,
    kernel_degree,
    max_average_degree,
    max_matching,
    poly_value,
    grad,
    run_plain,
    single_edge,
    symmetrize,
)

from conftest import brute_contains, brute_family, brute_matching


@st.composite
def hypergraphs(draw, max_n=7, rs=(2, 3)):
    r = draw(st.sampled_from(rs))
    n = draw(st.integers(min_value=r, max_value=max_n))
    cands = list(itertools.combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(cands), max_size=len(cands)))
    return Hypergraph(n, r, edges)


@st.composite
def weighted_graphs(draw):
    g = draw(hypergraphs())
    raw = draw(st.lists(st.floats(0.01, 1.0), min_size=g.n, max_size=g.n))
    total = sum(raw)
    return g, [v / total for v in raw]


@given(hypergraphs())
@settings(max_examples=80, deadline=None)
def test_handshake(g):
    assert sum(g.degrees) == g.r * len(g.edges)
    for v in range(g.n):
        assert g.degrees[v] == len(g.link([v]).edges)


@given(hypergraphs())
@settings(max_examples=60, deadline=None)
def test_shadow_properties(g):
    assert len(g.shadow(g.r)) == len(g.edges)
    sub_edges = g.edge_list[: len(g.edges) // 2]
    sub = Hypergraph(g.n, g.r, sub_edges)
    for p in range(1, g.r + 1):
        assert sub.shadow(p) <= g.shadow(p)


@given(hypergraphs())
@settings(max_examples=60, deadline=None)
def test_matching_frankl_bound(g):
    s = max_matching(g)
    assert s == brute_matching(g)
    assert len(g.edges) <= s * math.comb(g.n, g.r - 1)
    assert s <= g.n // g.r


@given(hypergraphs())
@settings(max_examples=60, deadline=None)
def test_kernel_degree_at_most_degree(g):
    for size in range(1, g.r):
        for D in itertools.combinations(range(g.n), size):
            kd = kernel_degree(g, D)
            assert kd <= g.degree(D)
            if g.degree(D) == 0:
                assert kd == 0


@given(hypergraphs(max_n=5), st.lists(st.integers(1, 3), min_size=5, max_size=5))
@settings(max_examples=40, deadline=None)
def test_blowup_counts(g, sizes):
    sizes = sizes[: g.n]
    while len(sizes) < g.n:
        sizes.append(1)
    b = blowup(g, sizes)
    assert len(b.edges) == sum(math.prod(sizes[i] for i in e) for e in g.edges)
    assert blowup(g, [1] * g.n).edges == g.edges


@given(hypergraphs(max_n=6), hypergraphs(max_n=4))
@settings(max_examples=60, deadline=None)
def test_containment_matches_brute_force(g, f):
    if f.r != g.r:
        return
    assert (contains_subhypergraph(g, f) is not None) == brute_contains(g, f)


@given(hypergraphs(max_n=6, rs=(3,)), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_family_matches_brute_force(g, p):
    f = single_edge(3)
    if p < f.n:
        return
    assert (contains_family_member(g, f, p) is not None) == brute_family(g, f, p)


@given(hypergraphs(rs=(2,)))
@settings(max_examples=40, deadline=None)
def test_mad_bounds_and_monotonicity(g):
    res = max_average_degree(g)
    if g.n:
        assert res.value >= Fraction(2 * len(g.edges), g.n)
    missing = [e for e in itertools.combinations(range(g.n), 2) if e not in g.edges]
    if missing:
        bigger = max_average_degree(g.with_edges(missing[:1]))
        assert bigger.value >= res.value
    if res.witness:
        inside = set(res.witness)
        e_in = sum(1 for e in g.edges if inside.issuperset(e))
        assert Fraction(2 * e_in, len(res.witness)) == res.value


@given(weighted_graphs())
@settings(max_examples=60, deadline=None)
def test_gradient_identity(gx):
    g, x = gx
    p = poly_value(g, x)
    lam = grad(g, x)
    assert abs(p - math.fsum(l * v for l, v in zip(lam, x)) / g.r) <= 1e-12
    assert 0.0 <= p <= 1.0 + 1e-12
    if g.edges:
        assert max(lam) >= g.r * p - 1e-12


@given(hypergraphs())
@settings(max_examples=50, deadline=None)
def test_equivalence_classes_partition(g):
    classes = equivalence_classes(g)
    flat = sorted(v for c in classes for v in c)
    assert flat == list(range(g.n))
    covered = g.covered_pairs
    for c in classes:
        for a, b in itertools.combinations(c, 2):
            assert (a, b) not in covered


@given(hypergraphs())
@settings(max_examples=50, deadline=None)
def test_symmetrize_clone_merges_classes(g):
    covered = g.covered_pairs
    pair = next(
        (
            (u, v)
            for u in range(g.n)
            for v in range(g.n)
            if u != v and (min(u, v), max(u, v)) not in covered
        ),
        None,
    )
    if pair is None:
        return
    u, v = pair
    h = symmetrize(g, v, u)
    assert any(u in c and v in c for c in equivalence_classes(h))
    # clone gains exactly u's degree
    assert h.degrees[v] == g.degrees[u]


@given(hypergraphs())
@settings(max_examples=40, deadline=None)
def test_run_plain_monotone_and_blowup(g):
    out = run_plain(g)
    assert len(out.result.edges) >= len(g.edges)
    from turanlag import core_representatives, is_blowup_of_quotient

    assert core_representatives(out.result).quotient.covers_pairs()
    assert is_blowup_of_quotient(out.result)
