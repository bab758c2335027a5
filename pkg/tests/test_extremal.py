import itertools
import math
import random

import pytest

from turanlag import (
    CancellativePredicate,
    ExactSearchRefused,
    FamilyPredicate,
    Hypergraph,
    SigmaPredicate,
    SubgraphPredicate,
    brute_force_ex,
    complete_hypergraph,
    contains_family_member,
    expanded_clique_with_embedded,
    family_free_subgraph,
    is_cancellative,
    kernel_clean,
    kernel_degree,
    local_search_lower,
    random_hypergraph,
    single_edge,
    turan_hypergraph,
)

from conftest import brute_is_cancellative


def k3():
    return complete_hypergraph(3, 2)


# -- exact search ------------------------------------------------------------


def test_mantel_small():
    for n in range(3, 6):
        res = brute_force_ex(n, 2, SubgraphPredicate(k3()))
        assert res.exact and res.value == (n // 2) * ((n + 1) // 2)
        assert len(res.witness.edges) == res.value
        assert SubgraphPredicate(k3()).is_free(res.witness)


def test_mantel_n4_full_enumeration_oracle():
    # all 2^6 graphs on 4 vertices, triangle-freeness by direct check
    cands = list(itertools.combinations(range(4), 2))
    best = 0
    for mask in range(1 << 6):
        edges = [cands[i] for i in range(6) if mask >> i & 1]
        g = Hypergraph(4, 2, edges)
        tri = any(
            (a, b) in g.edges and (a, c) in g.edges and (b, c) in g.edges
            for a, b, c in itertools.combinations(range(4), 3)
        )
        if not tri:
            best = max(best, len(edges))
    assert best == 4
    assert brute_force_ex(4, 2, SubgraphPredicate(k3())).value == 4


def test_cancellative_n5_full_enumeration_oracle():
    cands = list(itertools.combinations(range(5), 3))
    best = 0
    for mask in range(1 << 10):
        edges = [cands[i] for i in range(10) if mask >> i & 1]
        if len(edges) <= best:
            continue
        if brute_is_cancellative(Hypergraph(5, 3, edges)):
            best = len(edges)
    assert best == 4
    res = brute_force_ex(5, 3, CancellativePredicate())
    assert res.exact and res.value == 4
    assert is_cancellative(res.witness)


def test_sigma_equals_cancellative_for_r3():
    for n in (4, 5):
        a = brute_force_ex(n, 3, SigmaPredicate(3)).value
        b = brute_force_ex(n, 3, CancellativePredicate()).value
        assert a == b


def test_cancellative_r4_differs_from_sigma_state():
    # for r = 4 a violation can avoid any (r-1)-sharing pair entirely:
    # A, B with |A ^ B| = 4 contained in a third edge
    g = Hypergraph(6, 4, [(0, 1, 2, 3), (2, 3, 4, 5), (0, 1, 4, 5)])
    assert not is_cancellative(g)
    from turanlag import contains_sigma_member

    assert not contains_sigma_member(g)
    st = CancellativePredicate().state(6, 4)
    st.add((0, 1, 2, 3))
    st.add((2, 3, 4, 5))
    assert not st.can_add((0, 1, 4, 5))


def test_exact_search_cap():
    with pytest.raises(ExactSearchRefused):
        brute_force_ex(9, 3, SigmaPredicate(3))


def test_budget_abort():
    res = brute_force_ex(7, 2, SubgraphPredicate(k3()), max_nodes=20)
    assert not res.exact
    assert res.value <= 12
    assert SubgraphPredicate(k3()).is_free(res.witness)


def test_family_predicate_exact_small():
    # ex(n, all-pairs-covered 3-sets) vs forbidding the specific expansion
    fam = FamilyPredicate(Hypergraph(0, 3, []), 3)
    pattern = expanded_clique_with_embedded(Hypergraph(0, 3, []), 3).graph
    sub = SubgraphPredicate(pattern)
    for n in (4, 5):
        a = brute_force_ex(n, 3, fam).value
        b = brute_force_ex(n, 3, sub).value
        assert a <= b  # the family includes the specific member


def test_exact_invariant_under_pattern_relabeling():
    rng = random.Random(7)
    base = Hypergraph(4, 2, [(0, 1), (1, 2), (2, 3)])
    perm = list(range(4))
    rng.shuffle(perm)
    relabeled = base.relabel(perm)
    for n in (4, 5):
        assert (
            brute_force_ex(n, 2, SubgraphPredicate(base)).value
            == brute_force_ex(n, 2, SubgraphPredicate(relabeled)).value
        )


def test_exact_monotone_in_n():
    vals = [brute_force_ex(n, 3, SigmaPredicate(3)).value for n in range(3, 7)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


# -- heuristic search -----------------------------------------------------------


def test_local_search_family_turan_seed():
    res = local_search_lower(9, 3, FamilyPredicate(Hypergraph(0, 3, []), 4),
                             seed=0, iters=50)
    assert res.value >= 27
    assert not res.exact


def test_local_search_mantel_n4():
    res = local_search_lower(4, 2, SubgraphPredicate(k3()), seed=0, iters=200)
    assert res.value == 4


def test_local_search_iters0_returns_turan_seed():
    res = local_search_lower(9, 3, SigmaPredicate(3), seed=0, iters=0)
    assert res.value == len(turan_hypergraph(9, 3, 3).graph.edges) == 27
    assert res.witness.edges == turan_hypergraph(9, 3, 3).graph.edges


def test_local_search_deterministic():
    a = local_search_lower(7, 3, SigmaPredicate(3), seed=5, iters=100)
    b = local_search_lower(7, 3, SigmaPredicate(3), seed=5, iters=100)
    assert a.value == b.value and a.witness.edges == b.witness.edges


def test_local_search_witness_free():
    for pred in (SigmaPredicate(3), CancellativePredicate(),
                 FamilyPredicate(single_edge(3), 4)):
        res = local_search_lower(7, 3, pred, seed=3, iters=120)
        assert pred.is_free(res.witness)


# -- incremental states agree with the standalone predicates ---------------------


def test_states_agree_with_is_free():
    rng = random.Random(15)
    preds = [
        SubgraphPredicate(k3()),
        SubgraphPredicate(expanded_clique_with_embedded(single_edge(3), 4).graph),
        SigmaPredicate(3),
        CancellativePredicate(),
        FamilyPredicate(single_edge(3), 4),
    ]
    for pred in preds:
        r = 2 if pred.kind == "subgraph" and getattr(pred, "pattern").r == 2 else 3
        n = 6
        st = pred.state(n, r)
        added = []
        for e in rng.sample(list(itertools.combinations(range(n), r)), math.comb(n, r)):
            g_next = Hypergraph(n, r, added + [e])
            if st.can_add(e):
                assert pred.is_free(g_next), f"{pred.describe()} false add {e}"
                st.add(e)
                added.append(e)
            else:
                assert not pred.is_free(g_next), f"{pred.describe()} false block {e}"
        # removal keeps indices consistent
        for e in rng.sample(added, len(added) // 2):
            st.remove(e)
            added.remove(e)
        for e in itertools.combinations(range(n), r):
            if e in added:
                continue
            assert st.can_add(e) == pred.is_free(Hypergraph(n, r, added + [list(e)]))


# -- kernel cleanup ----------------------------------------------------------------


def test_kernel_clean_untouched():
    g = complete_hypergraph(6, 3)  # every pair degree 4 > 1*C(6,0)=1
    assert kernel_clean(g, 1, 2) == g


def test_kernel_clean_single_edge():
    g = Hypergraph(5, 3, [(0, 1, 2)])
    assert len(kernel_clean(g, 1, 2).edges) == 0


def test_kernel_clean_postcondition_random():
    rng = random.Random(33)
    for _ in range(20):
        n = rng.randint(5, 8)
        g = random_hypergraph(n, 3, density=rng.uniform(0.2, 0.8), rng=rng)
        for p, d in ((1, 1), (2, 2)):
            out = kernel_clean(g, p, d)
            assert len(g.edges) - len(out.edges) <= p * math.comb(n, d) * math.comb(n, 3 - d - 1)
            for D in itertools.combinations(range(n), d):
                if out.degree(D) > 0:
                    assert kernel_degree(out, D) > p
            assert kernel_clean(out, p, d) == out


def test_kernel_clean_validation():
    g = complete_hypergraph(5, 3)
    with pytest.raises(ValueError):
        kernel_clean(g, 1, 0)
    with pytest.raises(ValueError):
        kernel_clean(g, 1, 3)


# -- family-free extraction -----------------------------------------------------------


def test_family_free_subgraph_turan():
    t = turan_hypergraph(9, 3, 3).graph
    res = family_free_subgraph(t, single_edge(3), 3)
    assert res.checked and res.violation is None


def test_family_free_subgraph_random():
    pattern = expanded_clique_with_embedded(single_edge(3), 4).graph
    pred = SubgraphPredicate(pattern)
    rng = random.Random(55)
    for _ in range(15):
        n = rng.randint(6, 8)
        st = pred.state(n, 3)
        cands = list(itertools.combinations(range(n), 3))
        rng.shuffle(cands)
        for e in cands[: len(cands) // 2]:
            if st.can_add(e):
                st.add(e)
        g = st.graph()
        res = family_free_subgraph(g, single_edge(3), 3)
        assert res.checked
        assert res.violation is None
        assert contains_family_member(res.graph, single_edge(3), 4) is None
        p = pattern.n
        assert len(g.edges) - len(res.graph.edges) <= p * math.comb(n, 2) * math.comb(n, 0)


def test_family_free_subgraph_reports_violation():
    # a host that contains the expansion pattern and is dense enough to
    # survive cleaning keeps a family member; it is reported, not raised
    g = complete_hypergraph(10, 3)  # every pair degree 8 > p = 7
    res = family_free_subgraph(g, single_edge(3), 3)
    assert res.checked
    assert res.graph == g
    assert res.violation is not None
    assert res.violation.kind == "family-member"


def test_family_free_subgraph_validation():
    with pytest.raises(ValueError):
        family_free_subgraph(complete_hypergraph(4, 2), single_edge(2), 3)
