"""Edge-polynomial optimization on the probability simplex.

For an r-graph G the edge polynomial is p_G(x) = r! * sum over edges of
prod(x_i), and its Lagrangian lambda(G) is the maximum of p_G over 1-sum
nonnegative weights.  The gradient coordinates are
lambda_i = r! * sum over link edges of i of prod(x_j), which satisfy the exact
identities p_G(x) = (1/r) * sum lambda_i x_i and max_i lambda_i >= r * p_G(x).

The ascent used here is projected gradient with backtracking line search,
polished by a pairwise weight transfer: moving d = (lam_b - lam_a) / (2 r!)
from the smallest-gradient support vertex a to the largest-gradient support
vertex b raises p_G by at least (lam_b - lam_a)^2 / (4 r!), so the move never
decreases the objective.  Reported values are feasible-point evaluations and
hence certified lower bounds on lambda(G); the convergence flag only asserts
the first-order residual on the support.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .hypergraph import Hypergraph, VertexSet, falling_factorial

__all__ = [
    "WeightVector",
    "LagrangianEstimate",
    "poly_value",
    "grad",
    "lagrangian",
    "lagrangian_constrained",
    "f_r_eval",
    "compute_Mr",
    "clique_number",
    "motzkin_straus_reference",
    "lagrangian_density_search",
    "DensitySearchResult",
    "stability_probe",
    "certificate_label",
]

_SUPPORT_EPS = 1e-9


# -- weight vectors -----------------------------------------------------


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative vertex weights summing to 1 (renormalized on construction)."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = [float(v) for v in self.weights]
        if any(v < -1e-12 for v in w):
            raise ValueError("weights must be nonnegative")
        w = [max(v, 0.0) for v in w]
        if w:
            total = math.fsum(w)
            if total <= 0:
                raise ValueError("weights must have positive total")
            if abs(total - 1.0) > 1e-12:
                w = [v / total for v in w]
        object.__setattr__(self, "weights", tuple(w))

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(tuple([1.0 / n] * n)) if n else cls(())

    def __array__(self, dtype=None):
        return np.asarray(self.weights, dtype=dtype)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]


def _as_floats(x, n: int) -> list[float]:
    xs = [float(v) for v in x]
    if len(xs) != n:
        raise ValueError(f"weight vector has length {len(xs)}, expected {n}")
    return xs


# -- exact-ish reference evaluations (compensated summation) ------------


def poly_value(G: Hypergraph, x) -> float:
    """p_G(x) = r! * sum over edges of prod(x_i), compensated summation.

    No simplex constraint is imposed on x, so finite differences of this
    function are meaningful.
    """
    xs = _as_floats(x, G.n)
    rf = math.factorial(G.r)
    return rf * math.fsum(math.prod(xs[v] for v in e) for e in G.edge_list)


def grad(G: Hypergraph, x) -> list[float]:
    """Gradient of p_G: coordinate i is r! times the weight of the link of i."""
    xs = _as_floats(x, G.n)
    rf = math.factorial(G.r)
    acc: list[list[float]] = [[] for _ in range(G.n)]
    for e in G.edge_list:
        for v in e:
            acc[v].append(math.prod(xs[u] for u in e if u != v))
    return [rf * math.fsum(terms) for terms in acc]


# -- simplex projections ------------------------------------------------


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, len(v) + 1)
    cond = u - css / ks > 0
    rho = np.nonzero(cond)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


def _project_capped(v: np.ndarray, cap: float) -> np.ndarray:
    lo = float(v.min()) - 1.0
    hi = float(v.max())
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        s = np.clip(v - mid, 0.0, cap).sum()
        if s > 1.0:
            lo = mid
        else:
            hi = mid
    return np.clip(v - hi, 0.0, cap)


def _project(v: np.ndarray, cap: Optional[float]) -> np.ndarray:
    return _project_simplex(v) if cap is None else _project_capped(v, cap)


# -- ascent engine ------------------------------------------------------


class _Arrays(NamedTuple):
    edges: np.ndarray  # (E, r) vertex indices
    n: int
    r: int
    rf: int


def _arrays(G: Hypergraph) -> Optional[_Arrays]:
    if not G.edges:
        return None
    edges = np.array(G.edge_list, dtype=np.int64)
    return _Arrays(edges, G.n, G.r, math.factorial(G.r))


def _p_np(A: _Arrays, x: np.ndarray) -> float:
    return float(A.rf * x[A.edges].prod(axis=1).sum())


def _grad_np(A: _Arrays, x: np.ndarray) -> np.ndarray:
    lam = np.zeros(A.n)
    cols = x[A.edges]
    for j in range(A.r):
        if A.r == 1:
            others = np.ones(len(A.edges))
        else:
            others = np.prod(np.delete(cols, j, axis=1), axis=1)
        np.add.at(lam, A.edges[:, j], others)
    return A.rf * lam


def _pick_transfer(x: np.ndarray, lam: np.ndarray, cap: Optional[float]):
    """Donor/receiver pair for the pairwise transfer: min- and max-gradient
    support vertices (receiver must have cap headroom when constrained)."""
    support = np.nonzero(x > _SUPPORT_EPS)[0]
    if len(support) < 2:
        return None
    if cap is None:
        rec_pool = support
    else:
        rec_pool = support[x[support] < cap - 1e-12]
        if len(rec_pool) == 0:
            return None
    b = rec_pool[int(np.argmax(lam[rec_pool]))]
    a = support[int(np.argmin(lam[support]))]
    if a == b:
        return None
    return int(a), int(b)


def _ascend(A: _Arrays, x0: np.ndarray, cap: Optional[float],
            max_iters: int, tol: float) -> tuple[np.ndarray, float, int]:
    x = _project(np.asarray(x0, dtype=float), cap)
    val = _p_np(A, x)
    t = 1.0
    iters = 0
    while iters < max_iters:
        progressed = False
        lam = _grad_np(A, x)
        # gradient step with backtracking
        tt = t
        for _ in range(60):
            cand = _project(x + tt * lam, cap)
            pv = _p_np(A, cand)
            if pv > val + 1e-16:
                x, val, t = cand, pv, tt * 2.0
                progressed = True
                break
            tt *= 0.5
            if tt < 1e-20:
                break
        # pairwise transfer step
        lam = _grad_np(A, x)
        pick = _pick_transfer(x, lam, cap)
        if pick is not None:
            a, b = pick
            gap = lam[b] - lam[a]
            if gap > tol * 0.25:
                d = gap / (2.0 * A.rf)
                d = min(d, x[a])
                if cap is not None:
                    d = min(d, cap - x[b])
                if d > 0:
                    x = x.copy()
                    x[a] -= d
                    x[b] += d
                    nv = _p_np(A, x)
                    if nv > val:
                        progressed = True
                    val = nv
        iters += 1
        if not progressed:
            break
    # support cleanup with reprojection, then a final equalization pass
    x = x.copy()
    x[x < _SUPPORT_EPS] = 0.0
    s = x.sum()
    if s <= 0:
        x = _project(np.full(A.n, 1.0 / A.n), cap)
    else:
        x = x / s
        if cap is not None and x.max() > cap + 1e-15:
            x = _project_capped(x, cap)
    val = _p_np(A, x)
    for _ in range(300):
        lam = _grad_np(A, x)
        pick = _pick_transfer(x, lam, cap)
        if pick is None:
            break
        a, b = pick
        gap = lam[b] - lam[a]
        if gap <= tol * 0.25:
            break
        d = min(gap / (2.0 * A.rf), x[a])
        if cap is not None:
            d = min(d, cap - x[b])
        if d <= 0:
            break
        x[a] -= d
        x[b] += d
    val = _p_np(A, x)
    return x, val, iters


def _residual(G: Hypergraph, x, value: float, cap: Optional[float]) -> float:
    """Max over relevant support coordinates of |lambda_i - r*value|.

    Unconstrained: over the whole support.  Capped: over interior support
    only (coordinates strictly below the cap), since capped coordinates carry
    a multiplier and may legitimately exceed the common gradient value.
    """
    lam = grad(G, x)
    xs = list(x)
    idx = [i for i in range(G.n) if xs[i] > _SUPPORT_EPS]
    if cap is not None:
        idx = [i for i in idx if xs[i] < cap - 1e-12]
    if not idx:
        return 0.0
    target = G.r * value
    return max(abs(lam[i] - target) for i in idx)


def _greedy_supports(G: Hypergraph) -> list[tuple[int, ...]]:
    """Maximal pairwise-covered vertex sets, grown greedily from every vertex
    and every covered pair, in degree-descending and label orders."""
    n = G.n
    adj = [0] * n
    for u, v in G.covered_pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    deg = G.degrees
    by_degree = sorted(range(n), key=lambda v: (-deg[v], v))
    by_label = list(range(n))
    seeds: list[list[int]] = [[v] for v in range(n)]
    seeds += [[u, v] for u, v in sorted(G.covered_pairs)]
    out = set()
    for seed in seeds:
        mask = 0
        for v in seed:
            mask |= 1 << v
        for order in (by_degree, by_label):
            members = list(seed)
            mm = mask
            for u in order:
                if (mm >> u) & 1:
                    continue
                if (adj[u] & mm) == mm:
                    members.append(u)
                    mm |= 1 << u
            out.add(tuple(sorted(members)))
    return sorted(out)


@dataclass(frozen=True)
class LagrangianEstimate:
    """Best feasible value found, with its weights and convergence data.

    ``value`` is always a certified lower bound on the Lagrangian;
    ``gradient_residual`` is max over the support of |lambda_i - r*value|.
    For constrained runs ``beta`` echoes the cap and ``cap_binds`` reports
    whether the optimum sits on it.
    """

    value: float
    weights: WeightVector
    restarts_used: int
    converged: bool
    gradient_residual: float
    beta: Optional[float] = None
    cap_binds: Optional[bool] = None


def _optimize(G: Hypergraph, cap: Optional[float], restarts: int,
              max_iters: int, tol: float, seed: int) -> LagrangianEstimate:
    n = G.n
    A = _arrays(G)
    if A is None or n == 0:
        w = WeightVector.uniform(n)
        if cap is not None and n:
            w = WeightVector(tuple(_project_capped(np.full(n, 1.0 / n), cap)))
        return LagrangianEstimate(0.0, w, 0, True, 0.0,
                                  beta=cap, cap_binds=None if cap is None else False)

    starts: list[np.ndarray] = [np.full(n, 1.0 / n)]
    for sup in _greedy_supports(G):
        v = np.zeros(n)
        v[list(sup)] = 1.0 / len(sup)
        starts.append(v)
    for k in range(restarts):
        rng = np.random.default_rng([seed, k])
        starts.append(rng.dirichlet(np.ones(n)))

    best_x: Optional[np.ndarray] = None
    best_val = -1.0
    for x0 in starts:
        x, val, _ = _ascend(A, x0, cap, max_iters, tol)
        if val > best_val + 1e-15:
            best_val, best_x = val, x

    value = poly_value(G, best_x)
    resid = _residual(G, best_x, value, cap)
    wv = WeightVector(tuple(float(v) for v in best_x))
    binds = None if cap is None else bool(best_x.max() >= cap - 1e-9)
    return LagrangianEstimate(value, wv, restarts, resid <= tol, resid,
                              beta=cap, cap_binds=binds)


def lagrangian(G: Hypergraph, *, restarts: int = 50, max_iters: int = 5000,
               tol: float = 1e-9, seed: int = 0) -> LagrangianEstimate:
    """Multistart estimate of lambda(G).

    Starts: uniform weights, uniform weights on greedily grown pairwise-covered
    supports, and ``restarts`` seeded Dirichlet points.  The returned value is
    a certified lower bound (it is p_G at a feasible point); it is reported as
    lambda(G) when the gradient residual on the support is within ``tol``.
    """
    return _optimize(G, None, restarts, max_iters, tol, seed)


def lagrangian_constrained(G: Hypergraph, beta: float, *, restarts: int = 50,
                           max_iters: int = 5000, tol: float = 1e-9,
                           seed: int = 0) -> LagrangianEstimate:
    """Estimate of the Lagrangian restricted to max_i x_i <= beta.

    The feasible region is the capped simplex; ``cap_binds`` reports whether
    the best point sits on the cap (when it does, the value is also the
    equality-constrained optimum for this beta).
    """
    if G.n == 0:
        raise ValueError("constrained Lagrangian needs at least one vertex")
    if not (1.0 / G.n - 1e-12 <= beta <= 1.0 + 1e-12):
        raise ValueError(f"beta must lie in [1/n, 1], got {beta}")
    return _optimize(G, float(beta), restarts, max_iters, tol, seed)


# -- closed forms -------------------------------------------------------


def f_r_eval(r: int, x):
    """prod_{i=1}^{r-1} (x+i-2) / (x+r-3)^r; exact when x is a Fraction."""
    if r < 2:
        raise ValueError("defined for r >= 2")
    if x < 0:
        raise ValueError("x must be nonnegative")
    base = x + r - 3
    if base <= 0:
        raise ValueError(f"pole or undefined region: x + r - 3 = {base} <= 0")
    num = 1
    for i in range(1, r):
        num = num * (x + i - 2)
    return num / base**r


def _fr_derivative_numerator(r: int) -> list[int]:
    """Integer coefficients (ascending) of N'(x)(x+r-3) - r N(x), where
    N = prod_{i=1}^{r-1}(x+i-2); its sign is the sign of f_r' for x > 3-r."""
    N = [1]
    for i in range(1, r):
        c = i - 2
        new = [0] * (len(N) + 1)
        for k, a in enumerate(N):
            new[k] += c * a
            new[k + 1] += a
        N = new
    dN = [k * a for k, a in enumerate(N)][1:]
    s = r - 3
    term = [0] * (len(dN) + 1)
    for k, a in enumerate(dN):
        term[k] += s * a
        term[k + 1] += a
    g = [t - r * a for t, a in zip(term, N)]
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    return g


def _poly_sign(coeffs: list[int], x: Fraction) -> int:
    acc = Fraction(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return (acc > 0) - (acc < 0)


def compute_Mr(r: int) -> float:
    """Rightmost local maximizer of f_r on [2, inf); 2 when f_r is decreasing
    there (and by convention for r = 1).

    The derivative's numerator polynomial has integer coefficients; roots are
    located numerically, then pinned down by exact-sign rational bisection, and
    a root counts as a maximum only when the sign crosses + to -.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return 2.0
    g = _fr_derivative_numerator(r)
    if len(g) <= 1:
        return 2.0
    roots = np.roots(np.array(g[::-1], dtype=float))
    reals = sorted(float(z.real) for z in roots if abs(z.imag) < 1e-9)
    candidates = [z for z in reals if z > 2.0 + 1e-9]
    best = 2.0
    for z in candidates:
        gaps = [abs(z - o) for o in reals if abs(z - o) > 1e-12]
        delta = min([1e-3] + [gp / 4 for gp in gaps])
        delta = min(delta, (z - 2.0) / 2)
        lo = Fraction(z - delta).limit_denominator(10**15)
        hi = Fraction(z + delta).limit_denominator(10**15)
        slo, shi = _poly_sign(g, lo), _poly_sign(g, hi)
        if not (slo > 0 and shi < 0):
            continue  # touch or wrong-direction crossing: not a maximum
        while hi - lo > Fraction(1, 10**11):
            mid = (lo + hi) / 2
            sm = _poly_sign(g, mid)
            if sm > 0:
                lo = mid
            elif sm < 0:
                hi = mid
            else:
                lo = hi = mid
        best = max(best, float((lo + hi) / 2))
    return best


# -- clique-number oracle (2-graphs) ------------------------------------


def clique_number(G: Hypergraph) -> int:
    """Exact clique number of a 2-graph by branch and bound."""
    if G.r != 2:
        raise ValueError("clique number is defined here for 2-graphs")
    n = G.n
    if n == 0:
        return 0
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = 1

    def expand(size: int, cand: int) -> None:
        nonlocal best
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            if size + 1 > best:
                best = size + 1
            nxt = cand & adj[v]
            if nxt:
                expand(size + 1, nxt)

    expand(0, (1 << n) - 1)
    return best


def motzkin_straus_reference(G: Hypergraph) -> float:
    """Exact Lagrangian of a 2-graph: 1 - 1/omega(G) via the clique number.

    Serves as the independent oracle for the ascent on 2-graphs.
    """
    if G.r != 2:
        raise ValueError("the clique-number oracle applies to 2-graphs")
    w = clique_number(G)
    return 0.0 if w <= 0 else 1.0 - 1.0 / w


# -- Lagrangian density search ------------------------------------------


class DensitySearchResult(NamedTuple):
    best_value: float
    witness: Hypergraph
    exact: bool
    evaluated: int


def lagrangian_density_search(F: Hypergraph, t_max: int, *, seed: int = 0,
                              restarts: int = 8, iters: int = 150,
                              exhaustive_cap: int = 25) -> DensitySearchResult:
    """Lower bound on the Lagrangian density of F: max lambda(G) over F-free
    hosts on at most t_max vertices.

    Hosts with exactly t vertices are searched for each t <= t_max:
    exhaustively over maximal F-free graphs while C(t, r) <= exhaustive_cap,
    by seeded add/remove local search beyond.  ``exact`` records whether every
    host size was exhausted (the value is a lower bound either way).
    """
    from .hypergraph import find_embedding as _fe

    if t_max < F.r:
        raise ValueError("t_max must be at least the uniformity")
    r = F.r
    best_val = 0.0
    best_wit = Hypergraph(t_max, r, [])
    evaluated = 0
    exact = True
    opts = dict(restarts=restarts, max_iters=2000, tol=1e-9, seed=seed)

    def consider(G: Hypergraph) -> None:
        nonlocal best_val, best_wit, evaluated
        evaluated += 1
        est = lagrangian(G, **opts)
        if est.value > best_val + 1e-12:
            best_val, best_wit = est.value, G

    for t in range(r, t_max + 1):
        empty = Hypergraph(t, r, [])
        if _fe(empty, F) is not None:
            continue  # F (edgeless or tiny) already embeds in t isolated vertices
        cands = sorted(itertools.combinations(range(t), r),
                       key=lambda e: e[::-1])
        if math.comb(t, r) <= exhaustive_cap:
            _density_dfs(F, t, cands, consider)
        else:
            exact = False
            _density_local(F, t, cands, consider, seed, iters)
    return DensitySearchResult(best_val, best_wit, exact, evaluated)


def _density_dfs(F: Hypergraph, t: int, cands, consider) -> None:
    from .hypergraph import find_embedding as _fe

    current: list = []

    def creates_copy(edge_set: frozenset, e) -> bool:
        H = Hypergraph(t, F.r, list(edge_set) + [e])
        return _fe(H, F, require_edge=e) is not None

    def rec(i: int) -> None:
        if i == len(cands):
            es = frozenset(current)
            for e in cands:
                if e not in es and not creates_copy(es, e):
                    return  # not maximal; the superset leaf covers it
            consider(Hypergraph(t, F.r, current))
            return
        e = cands[i]
        if not creates_copy(frozenset(current), e):
            current.append(e)
            rec(i + 1)
            current.pop()
        rec(i + 1)

    rec(0)


def _density_local(F: Hypergraph, t: int, cands, consider, seed: int,
                   iters: int) -> None:
    from .hypergraph import find_embedding as _fe

    rng = random.Random(seed * 1000003 + t)
    current: set = set()

    def addable(e) -> bool:
        H = Hypergraph(t, F.r, list(current) + [e])
        return _fe(H, F, require_edge=e) is None

    def greedy_fill(order) -> None:
        for e in order:
            if e not in current and addable(e):
                current.add(e)

    greedy_fill(rng.sample(cands, len(cands)))
    consider(Hypergraph(t, F.r, current))
    # perturb-and-refill rounds
    for _ in range(iters):
        if current and rng.random() < 0.5:
            for e in rng.sample(sorted(current), min(2, len(current))):
                current.discard(e)
        greedy_fill(rng.sample(cands, len(cands)))
        consider(Hypergraph(t, F.r, current))


# -- stability probe ----------------------------------------------------


def stability_probe(x, eps: float) -> VertexSet:
    """Smallest set of coordinates, taken in decreasing-weight order (ties by
    label), whose total weight reaches 1 - eps.  Returned sorted ascending."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    xs = [float(v) for v in x]
    order = sorted(range(len(xs)), key=lambda i: (-xs[i], i))
    out: list[int] = []
    cum = 0.0
    for i in order:
        out.append(i)
        cum += xs[i]
        if cum >= 1.0 - eps:
            break
    return tuple(sorted(out))


# -- certificate labeling ------------------------------------------------


def certificate_label(G: Hypergraph, est: LagrangianEstimate) -> str:
    """Conservative exactness label for a reported Lagrangian value.

    'exact-motzkin-straus' when the clique-number oracle confirms a 2-graph
    value; 'exact-symmetric' when the support induces a complete r-graph whose
    known optimum matches; otherwise 'lower-bound'.
    """
    if G.r == 2 and G.n and abs(est.value - motzkin_straus_reference(G)) <= 1e-8:
        return "exact-motzkin-straus"
    support = [v for v in range(G.n) if G.degrees[v] > 0]
    m = len(support)
    if m >= G.r and len(G.edges) == math.comb(m, G.r):
        inside = set(support)
        if all(inside.issuperset(e) for e in G.edges):
            known = falling_factorial(m, G.r) / m**G.r
            if abs(est.value - known) <= 1e-9:
                return "exact-symmetric"
    return "lower-bound"
