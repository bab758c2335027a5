"""Command-line front end.

Construction specs (for `construct` and inside forbidden specs):
  turan:n=9,r=3,l=3      gentriangle:r=3       fan:r=3
  complete:n=4,r=3       empty:n=5,r=3         edge:r=3
  path:k=4               star:k=5              broom:handle=3,leaves=2
  tree:k=7,seed=0        expand:F=<file.hg>,p=5
  enlarge:T=<file.hg>,r=3                      file:<path.hg>

Forbidden specs (for `search --forbid`):
  subgraph:<construction-spec>    family:p=4:<construction-spec>
  sigma:r=3                       cancellative

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhausted before the exact search finished.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .hypergraph import Hypergraph, max_matching
from .constructions import (
    broom_graph,
    complete_hypergraph,
    enlargement,
    expanded_clique_with_embedded,
    generalized_triangle,
    path_graph,
    random_tree,
    single_edge,
    star_graph,
    turan_hypergraph,
)
from .extremal import (
    CancellativePredicate,
    ExactSearchRefused,
    FamilyPredicate,
    SigmaPredicate,
    SubgraphPredicate,
    brute_force_ex,
    local_search_lower,
)
from .hgio import dump, load, serialize_hypergraph
from .lagrangian import certificate_label, lagrangian, lagrangian_constrained
from .symmetrization import run_plain, run_with_cleaning
from .verify import SUITES, run_verify


class SpecError(ValueError):
    pass


def _params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise SpecError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def build_from_spec(spec: str) -> Hypergraph:
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "file":
        return load(rest)
    p = _params(rest)
    try:
        if name == "turan":
            return turan_hypergraph(int(p["n"]), int(p["r"]), int(p["l"])).graph
        if name == "gentriangle":
            return generalized_triangle(int(p["r"]))
        if name == "fan":
            r = int(p["r"])
            return expanded_clique_with_embedded(single_edge(r), r + 1).graph
        if name == "complete":
            return complete_hypergraph(int(p["n"]), int(p["r"]))
        if name == "empty":
            return Hypergraph(int(p["n"]), int(p["r"]), [])
        if name == "edge":
            return single_edge(int(p["r"]))
        if name == "path":
            return path_graph(int(p["k"]))
        if name == "star":
            return star_graph(int(p["k"]))
        if name == "broom":
            return broom_graph(int(p["handle"]), int(p["leaves"]))
        if name == "tree":
            return random_tree(int(p["k"]), int(p.get("seed", 0)))
        if name == "expand":
            return expanded_clique_with_embedded(load(p["F"]), int(p["p"])).graph
        if name == "enlarge":
            return enlargement(load(p["T"]), int(p["r"]))
    except KeyError as exc:
        raise SpecError(f"spec {spec!r} is missing parameter {exc}") from None
    raise SpecError(f"unknown construction {name!r}")


def parse_forbidden(spec: str):
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "cancellative":
        return CancellativePredicate()
    if kind == "sigma":
        return SigmaPredicate(int(_params(rest)["r"]))
    if kind == "subgraph":
        return SubgraphPredicate(build_from_spec(rest))
    if kind == "family":
        head, _, inner = rest.partition(":")
        p = _params(head)
        return FamilyPredicate(build_from_spec(inner), int(p["p"]))
    raise SpecError(f"unknown forbidden kind {kind!r}")


def _cmd_construct(args) -> int:
    g = build_from_spec(args.spec)
    if args.output:
        dump(g, args.output)
    else:
        sys.stdout.write(serialize_hypergraph(g))
    return 0


def _cmd_info(args) -> int:
    g = load(args.graph)
    deg = g.degrees or (0,)
    info = {
        "n": g.n,
        "r": g.r,
        "edges": len(g.edges),
        "covers_pairs": g.covers_pairs(),
        "min_degree": min(deg),
        "max_degree": max(deg),
        "avg_degree": (g.r * len(g.edges) / g.n) if g.n else 0.0,
        "max_matching": max_matching(g),
    }
    if args.json:
        print(json.dumps(info, sort_keys=True))
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return 0


def _cmd_lagrangian(args) -> int:
    g = load(args.graph)
    if args.beta is not None:
        beta = float(Fraction(args.beta))
        est = lagrangian_constrained(g, beta, restarts=args.restarts,
                                     seed=args.seed)
    else:
        est = lagrangian(g, restarts=args.restarts, seed=args.seed)
    payload = {
        "value": est.value,
        "weights": list(est.weights),
        "converged": est.converged,
        "gradient_residual": est.gradient_residual,
        "certificate": certificate_label(g, est),
    }
    if est.beta is not None:
        payload["beta"] = est.beta
        payload["cap_binds"] = est.cap_binds
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for k, v in payload.items():
            print(f"{k}: {v}")
    return 0


def _cmd_symmetrize(args) -> int:
    g = load(args.graph)
    if args.alpha is not None:
        out = run_with_cleaning(g, Fraction(args.alpha))
    else:
        out = run_plain(g)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(out.trace.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    if args.output:
        dump(out.result, args.output)
    summary = {
        "input_edges": len(g.edges),
        "result_n": out.result.n,
        "result_edges": len(out.result.edges),
        "steps": len(out.trace.steps),
        "kept": list(out.kept),
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_search(args) -> int:
    pred = parse_forbidden(args.forbid)
    if not args.sweep and args.n is None:
        print("error: provide --n or --sweep LO:HI", file=sys.stderr)
        return 2
    if args.sweep:
        lo, _, hi = args.sweep.partition(":")
        print("n,r,value,exact,nodes,elapsed")
        worst_exact = True
        for n in range(int(lo), int(hi) + 1):
            if args.heuristic:
                res = local_search_lower(n, args.r, pred, seed=args.seed,
                                         iters=args.iters)
            else:
                res = brute_force_ex(n, args.r, pred, seed=args.seed,
                                     max_seconds=args.budget_secs)
            worst_exact = worst_exact and res.exact
            print(f"{n},{args.r},{res.value},{int(res.exact)},"
                  f"{res.nodes_explored},{res.elapsed:.3f}")
        return 0 if (worst_exact or args.heuristic) else 3
    if args.heuristic:
        res = local_search_lower(args.n, args.r, pred, seed=args.seed,
                                 iters=args.iters)
    else:
        try:
            res = brute_force_ex(args.n, args.r, pred, seed=args.seed,
                                 max_seconds=args.budget_secs)
        except ExactSearchRefused as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    payload = {
        "n": args.n,
        "r": args.r,
        "forbid": pred.describe(),
        "value": res.value,
        "exact": res.exact,
        "nodes": res.nodes_explored,
        "elapsed": round(res.elapsed, 3),
        "witness": [list(e) for e in res.witness.edge_list],
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        mode = "exact" if res.exact else "lower bound"
        print(f"ex({args.n}, {pred.describe()}) {mode}: {res.value}")
        print(f"witness edges: {payload['witness']}")
    if not args.heuristic and not res.exact:
        return 3
    return 0


def _cmd_verify(args) -> int:
    report = run_verify(args.suite, args.seed)
    if args.json:
        text = report.to_json()
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
            print(report.to_table())
    else:
        print(report.to_table())
    return 0 if report.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="turanlag", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a named hypergraph")
    c.add_argument("spec")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=_cmd_construct)

    i = sub.add_parser("info", help="basic statistics of a .hg file")
    i.add_argument("graph")
    i.add_argument("--json", action="store_true")
    i.set_defaults(fn=_cmd_info)

    l = sub.add_parser("lagrangian", help="estimate the Lagrangian")
    l.add_argument("--graph", required=True)
    l.add_argument("--beta", default=None, help="cap on the largest weight (float or P/Q)")
    l.add_argument("--restarts", type=int, default=50)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--json", action="store_true")
    l.set_defaults(fn=_cmd_lagrangian)

    s = sub.add_parser("symmetrize", help="run symmetrization (optionally with cleaning)")
    s.add_argument("--graph", required=True)
    s.add_argument("--alpha", default=None, help="density threshold as P/Q")
    s.add_argument("--trace", default=None, help="write the step trace as JSON")
    s.add_argument("-o", "--output", default=None, help="write the result graph")
    s.set_defaults(fn=_cmd_symmetrize)

    e = sub.add_parser("search", help="max edges avoiding a forbidden configuration")
    e.add_argument("--n", type=int)
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--forbid", required=True)
    e.add_argument("--sweep", default=None, metavar="LO:HI",
                   help="CSV over a range of n instead of a single run")
    mode = e.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--heuristic", action="store_true")
    e.add_argument("--budget-secs", type=float, default=None)
    e.add_argument("--iters", type=int, default=2000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--json", action="store_true")
    e.set_defaults(fn=_cmd_search)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", default=None, help="write JSON report to a path ('-' for stdout)")
    v.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (SpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
