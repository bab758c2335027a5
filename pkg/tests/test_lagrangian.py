import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from turanlag import (
    Hypergraph,
    WeightVector,
    certificate_label,
    clique_number,
    complete_hypergraph,
    compute_Mr,
    enlargement,
    f_r_eval,
    falling_factorial,
    grad,
    lagrangian,
    lagrangian_constrained,
    lagrangian_density_search,
    max_average_degree,
    motzkin_straus_reference,
    path_graph,
    poly_value,
    random_hypergraph,
    single_edge,
    stability_probe,
)
from turanlag.lagrangian import _arrays, _grad_np, _p_np, _pick_transfer


def cycle(n):
    return Hypergraph(n, 2, [(i, (i + 1) % n) for i in range(n)])


# -- poly_value / grad ------------------------------------------------------


def test_poly_value_examples():
    e = single_edge(3)
    assert poly_value(e, [1 / 3] * 3) == pytest.approx(2 / 9, abs=1e-15)
    g = Hypergraph(4, 3, [(0, 1, 2)])
    assert poly_value(g, [1, 0, 0, 0]) == 0.0
    k4 = complete_hypergraph(4, 3)
    assert poly_value(k4, [0.25] * 4) == pytest.approx(0.375, abs=1e-15)
    with pytest.raises(ValueError):
        poly_value(e, [0.5, 0.5])


def test_grad_examples():
    e = single_edge(3)
    lam = grad(e, [1 / 3] * 3)
    assert lam == pytest.approx([2 / 3] * 3)
    # identity p = (1/r) sum lambda_i x_i
    assert (1 / 3) * sum(l * x for l, x in zip(lam, [1 / 3] * 3)) == pytest.approx(2 / 9)
    g = Hypergraph(4, 3, [(0, 1, 2)])
    assert grad(g, [0.3, 0.3, 0.2, 0.2])[3] == 0.0


def test_grad_matches_finite_differences():
    rng = random.Random(2)
    h = 1e-5
    for _ in range(20):
        r = rng.choice((2, 3))
        n = rng.randint(r + 1, 8)
        g = random_hypergraph(n, r, density=0.6, rng=rng)
        x = [rng.random() for _ in range(n)]
        lam = grad(g, x)
        for i in range(n):
            xp, xm = list(x), list(x)
            xp[i] += h
            xm[i] -= h
            fd = (poly_value(g, xp) - poly_value(g, xm)) / (2 * h)
            assert abs(fd - lam[i]) <= 1e-6


def test_gradient_identity_tight():
    rng = random.Random(9)
    for _ in range(50):
        r = rng.choice((2, 3))
        n = rng.randint(r, 9)
        g = random_hypergraph(n, r, density=0.5, rng=rng)
        x = [rng.random() for _ in range(n)]
        s = sum(x) or 1.0
        x = [v / s for v in x]
        p = poly_value(g, x)
        lam = grad(g, x)
        assert abs(p - math.fsum(l * v for l, v in zip(lam, x)) / r) <= 1e-12
        if g.edges:
            assert max(lam) >= r * p - 1e-12


# -- weight vectors -----------------------------------------------------------


def test_weight_vector_normalizes():
    w = WeightVector((2.0, 2.0))
    assert w.weights == (0.5, 0.5)
    assert len(WeightVector.uniform(4)) == 4
    with pytest.raises(ValueError):
        WeightVector((-0.5, 1.5))
    with pytest.raises(ValueError):
        WeightVector((0.0, 0.0))


# -- lagrangian ----------------------------------------------------------------


def test_lagrangian_complete_graphs():
    for m, r in ((3, 2), (4, 2), (4, 3), (5, 3)):
        est = lagrangian(complete_hypergraph(m, r), restarts=20, seed=0)
        want = falling_factorial(m, r) / m**r
        assert abs(est.value - want) <= 1e-8
        assert est.converged and est.gradient_residual <= 1e-9
        assert abs(poly_value(complete_hypergraph(m, r), est.weights) - est.value) <= 1e-10


def test_lagrangian_grid_oracle_k43():
    # dense simplex grid at resolution 1/60 confirms the uniform optimum
    k = complete_hypergraph(4, 3)
    best = 0.0
    for c in itertools.combinations(range(63), 3):
        parts = (c[0], c[1] - c[0] - 1, c[2] - c[1] - 1, 62 - c[2])
        x = [p / 60 for p in parts]
        best = max(best, poly_value(k, x))
    assert best <= 0.375 + 1e-12
    est = lagrangian(k, restarts=10, seed=0)
    assert est.value >= best - 1e-12
    assert abs(est.value - 0.375) <= 1e-8


def test_lagrangian_c5():
    est = lagrangian(cycle(5), restarts=50, seed=0)
    assert abs(est.value - 0.5) <= 1e-8
    assert abs(est.value - motzkin_straus_reference(cycle(5))) <= 1e-8


def test_lagrangian_empty():
    est = lagrangian(Hypergraph(4, 3, []))
    assert est.value == 0.0 and est.converged
    est0 = lagrangian(Hypergraph(0, 2, []))
    assert est0.value == 0.0


def test_lagrangian_at_least_uniform():
    rng = random.Random(31)
    for _ in range(10):
        g = random_hypergraph(rng.randint(3, 8), rng.choice((2, 3)),
                              density=0.5, rng=rng)
        est = lagrangian(g, restarts=5, seed=0)
        assert est.value >= poly_value(g, [1 / g.n] * g.n) - 1e-12


def test_lagrangian_monotone_under_edge_addition():
    rng = random.Random(17)
    g = random_hypergraph(6, 3, density=0.3, rng=rng)
    missing = [e for e in itertools.combinations(range(6), 3) if e not in g.edges]
    g2 = g.with_edges(missing[:2])
    v1 = lagrangian(g, restarts=10, seed=0).value
    v2 = lagrangian(g2, restarts=10, seed=0).value
    assert v2 >= v1 - 1e-9


# -- the pairwise transfer step -----------------------------------------------


def test_transfer_step_never_decreases():
    rng = random.Random(4)
    for _ in range(25):
        r = rng.choice((2, 3))
        n = rng.randint(r + 1, 8)
        g = random_hypergraph(n, r, density=0.6, rng=rng)
        if not g.edges:
            continue
        A = _arrays(g)
        x = np.array([rng.random() for _ in range(n)])
        x /= x.sum()
        for _ in range(50):
            lam = _grad_np(A, x)
            pick = _pick_transfer(x, lam, None)
            if pick is None:
                break
            a, b = pick
            gap = lam[b] - lam[a]
            if gap <= 0:
                break
            before = _p_np(A, x)
            d = min(gap / (2 * A.rf), x[a])
            x = x.copy()
            x[a] -= d
            x[b] += d
            assert _p_np(A, x) >= before - 1e-14


def test_leader_concentration_on_two_graphs():
    # near-optimal weights admit a coordinate that is simultaneously close to
    # the max weight and the max gradient (transfer-step algebra)
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(4, 8)
        g = random_hypergraph(n, 2, density=0.6, rng=rng)
        if not g.edges:
            continue
        lam_true = motzkin_straus_reference(g)
        x = [rng.random() for _ in range(n)]
        s = sum(x)
        x = [v / s for v in x]
        eta = max(lam_true - poly_value(g, x), 1e-12)
        lam = grad(g, x)
        slack = 2 * math.factorial(2) * math.sqrt(eta)
        assert any(
            x[i] >= max(x) - slack and lam[i] >= max(lam) - slack
            for i in range(n)
        )


# -- constrained ----------------------------------------------------------------


def test_constrained_examples():
    e3 = single_edge(3)
    est = lagrangian_constrained(e3, 1 / 3, restarts=10, seed=0)
    assert abs(est.value - 2 / 9) <= 1e-8 and est.cap_binds
    est2 = lagrangian_constrained(e3, 1.0, restarts=10, seed=0)
    assert abs(est2.value - 2 / 9) <= 1e-8 and not est2.cap_binds
    k4 = complete_hypergraph(4, 2)
    est3 = lagrangian_constrained(k4, 0.25, restarts=10, seed=0)
    assert abs(est3.value - 0.75) <= 1e-8


def test_constrained_envelope():
    g = cycle(5)
    lam = lagrangian(g, restarts=30, seed=0).value
    best = max(
        lagrangian_constrained(g, b, restarts=30, seed=0).value
        for b in (0.2, 0.3, 0.4, 0.5, 0.7, 1.0)
    )
    assert abs(best - lam) <= 1e-6


def test_constrained_beta_bounds():
    e3 = single_edge(3)
    with pytest.raises(ValueError):
        lagrangian_constrained(e3, 0.1)
    with pytest.raises(ValueError):
        lagrangian_constrained(e3, 1.5)


# -- closed forms -----------------------------------------------------------------


def test_f_r_examples():
    assert f_r_eval(3, Fraction(3)) == Fraction(2, 9)
    for k in range(3, 9):
        for r in range(2, 6):
            lhs = (k - 2) * f_r_eval(r, Fraction(k))
            rhs = Fraction(falling_factorial(k + r - 3, r), (k + r - 3) ** r)
            assert lhs == rhs
    assert f_r_eval(3, 1000.0) < 1e-3  # decays at infinity
    with pytest.raises(ValueError):
        f_r_eval(2, 1.0)  # pole at x + r - 3 = 0
    with pytest.raises(ValueError):
        f_r_eval(3, -1.0)


def test_compute_Mr():
    assert compute_Mr(1) == 2.0
    assert abs(compute_Mr(2) - 2.0) <= 1e-9
    assert abs(compute_Mr(3) - 2.0) <= 1e-9
    assert abs(compute_Mr(4) - (2 + math.sqrt(3))) <= 1e-9
    vals = [compute_Mr(r) for r in range(2, 9)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


def test_mr_is_a_maximum_of_fr():
    for r in (4, 5, 6):
        m = compute_Mr(r)
        f0 = f_r_eval(r, m)
        assert f0 >= f_r_eval(r, m - 1e-4)
        assert f0 >= f_r_eval(r, m + 1e-4)


# -- clique oracle ------------------------------------------------------------------


def test_motzkin_straus_reference():
    assert motzkin_straus_reference(complete_hypergraph(4, 2)) == pytest.approx(0.75)
    assert motzkin_straus_reference(cycle(5)) == pytest.approx(0.5)
    assert motzkin_straus_reference(Hypergraph(3, 2, [])) == 0.0
    with pytest.raises(ValueError):
        motzkin_straus_reference(complete_hypergraph(4, 3))


def test_clique_number_brute_agreement():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(3, 8)
        g = random_hypergraph(n, 2, density=rng.uniform(0.2, 0.9), rng=rng)
        best = 1
        for k in range(2, n + 1):
            for sub in itertools.combinations(range(n), k):
                if all((a, b) in g.edges for a, b in itertools.combinations(sub, 2)):
                    best = max(best, k)
        assert clique_number(g) == best


# -- local-max corollary (2-graphs) ---------------------------------------------------


def test_local_max_bound_two_graphs():
    rng = random.Random(19)
    for _ in range(20):
        n = rng.randint(3, 9)
        g = random_hypergraph(n, 2, density=0.55, rng=rng)
        d = float(max_average_degree(g).value)
        x = [rng.random() for _ in range(n)]
        s = sum(x)
        x = [v / s for v in x]
        assert poly_value(g, x) <= max(x) * d + 1e-12


# -- density search -------------------------------------------------------------------


def test_density_search_triangle():
    res = lagrangian_density_search(complete_hypergraph(3, 2), 4, seed=0)
    assert abs(res.best_value - 0.5) <= 1e-6
    assert res.exact


def test_density_search_single_edge():
    res = lagrangian_density_search(single_edge(3), 4, seed=0)
    assert res.best_value == 0.0


def test_density_search_enlarged_path():
    F = enlargement(path_graph(3), 3)
    res = lagrangian_density_search(F, 4, seed=0)
    assert res.best_value >= 2 / 9 - 1e-9
    from turanlag import find_embedding

    assert find_embedding(res.witness, F) is None


# -- stability probe -------------------------------------------------------------------


def test_stability_probe():
    assert len(stability_probe([0.2] * 5, 0.5)) == 3
    assert stability_probe([0.97, 0.01, 0.01, 0.01], 0.05) == (0,)
    est = lagrangian(complete_hypergraph(4, 3), restarts=10, seed=0)
    assert len(stability_probe(est.weights, 0.01)) == 4
    with pytest.raises(ValueError):
        stability_probe([1.0], 0.0)
    with pytest.raises(ValueError):
        stability_probe([1.0], 1.0)


# -- blowup bound (small version of the acceptance check) -----------------------------


def test_blowup_bound_small():
    rng = random.Random(3)
    F = enlargement(path_graph(3), 3)
    from turanlag import SubgraphPredicate, blowup

    pred = SubgraphPredicate(F)
    for _ in range(5):
        st = pred.state(5, 3)
        cands = list(itertools.combinations(range(5), 3))
        rng.shuffle(cands)
        for e in cands:
            if st.can_add(e):
                st.add(e)
        L = st.graph()
        est = lagrangian(L, restarts=10, seed=0)
        sizes = [rng.randint(1, 4) for _ in range(5)]
        n = sum(sizes)
        assert len(blowup(L, sizes).edges) <= est.value * n**3 / 6 + 1e-6 * n**3


# -- certificates ----------------------------------------------------------------------


def test_certificate_labels():
    k4 = complete_hypergraph(4, 2)
    est = lagrangian(k4, restarts=5, seed=0)
    assert certificate_label(k4, est) == "exact-motzkin-straus"
    k43 = complete_hypergraph(4, 3)
    est2 = lagrangian(k43, restarts=5, seed=0)
    assert certificate_label(k43, est2) == "exact-symmetric"
    g = Hypergraph(5, 3, [(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    est3 = lagrangian(g, restarts=5, seed=0)
    assert certificate_label(g, est3) == "lower-bound"
