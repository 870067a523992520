"""Command-line driver: ``weightflow run | oracle-check | metrics``."""
import argparse
import json
import os
import sys
import time

import numpy as np

from . import kernels
from .analytic import analytic_oracle, break_point, shape_graph
from .community import Partition, contingency, ari, modularity, nmi, sweep
from .errors import AlphaOutsideBranch, InputFormatError, InvariantViolation, VertexSetMismatch, WeightFlowError
from .flow import FlowConfig, FlowVariant, run_flow
from .io import fmt, load_graph, read_labels, write_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

# two alphas strictly inside each branch of every closed form
ORACLE_CASES = [
    ("segment", None, (0.1, 0.3, 0.6, 0.8)),
    ("path3", None, (0.1, 0.25, 0.5, 0.8)),
    ("triangle", None, (0.1, 0.25, 0.5, 0.8)),
    ("square", None, (0.1, 0.25, 0.5, 0.8)),
    ("k4", None, (0.1, 0.2, 0.5, 0.8)),
    ("star", 6, (0.05, 0.1, 0.5, 0.8)),
]


def _num(x):
    return None if x is None else float(fmt(x))


def _row(r):
    if r is None:
        return None
    return {"cutoff": _num(r.cutoff), "k": r.k, "modularity": _num(r.modularity), "ari": _num(r.ari), "nmi": _num(r.nmi)}


def cmd_run(args):
    g = load_graph(args.input)
    truth = None
    if args.labels:
        truth = Partition.from_labels(read_labels(args.labels), g.labels)
    try:
        cfg = FlowConfig(
            alpha=args.alpha,
            step=args.step,
            iterations=args.iters,
            variant=args.variant,
            allow_alpha_one=args.allow_alpha_one,
            record_history=args.trace,
        )
    except ValueError as exc:
        raise InputFormatError("<arguments>", 0, str(exc)) from None

    t0 = time.perf_counter()
    state = run_flow(g, cfg)
    result = sweep(g, state, truth, args.sweep_resolution, modularity_on=args.modularity_on)
    wall_ms = (time.perf_counter() - t0) * 1000.0

    manifest = {
        "config": {
            "input": os.path.abspath(args.input),
            "labels": os.path.abspath(args.labels) if args.labels else None,
            "variant": cfg.variant.value,
            "alpha": cfg.alpha,
            "step": cfg.step,
            "iterations": cfg.iterations,
            "sweep_resolution": args.sweep_resolution,
            "positivity_floor": _num(state.floor),
            "allow_alpha_one": cfg.allow_alpha_one,
            "trace": bool(args.trace),
            "modularity_on": args.modularity_on,
            "backend": kernels.BACKEND,
            "deterministic": True,
        },
        "wall_ms": _num(wall_ms),
        "clamp_events": state.clamp_events,
        "best": {
            "by_modularity": _row(result.best("modularity")),
            "by_ari": _row(result.best("ari")),
            "by_nmi": _row(result.best("nmi")),
        },
    }

    # everything is computed before the first file is written
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "run.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    write_csv(
        os.path.join(args.out, "sweep.csv"),
        ["cutoff", "k", "modularity", "ari", "nmi"],
        [[fmt(r.cutoff), r.k, fmt(r.modularity), fmt(r.ari), fmt(r.nmi)] for r in result.rows],
    )
    lab = g.labels
    write_csv(
        os.path.join(args.out, "final_weights.csv"),
        ["u", "v", "weight"],
        [[lab[u], lab[v], fmt(w)] for u, v, w in zip(g.eu, g.ev, state.weights)],
    )
    if args.trace:
        rows = []
        for it, w, k in state.history:
            rows.extend([it, e, fmt(w[e]), fmt(k[e])] for e in range(g.m))
        write_csv(os.path.join(args.out, "trace.csv"), ["iteration", "edge", "weight", "curvature"], rows)
    print(json.dumps(manifest["best"]))
    return EXIT_OK


def oracle_table(step=0.01, horizon=1.0, alphas=None, branch=None, tol=0.02):
    """Integrate every closed-form shape and compare; returns result dicts."""
    out = []
    for shape, n, defaults in ORACLE_CASES:
        name = f"star{n}" if n else shape
        for a in alphas or defaults:
            rec = {"shape": name, "alpha": a, "step": step}
            try:
                exact = analytic_oracle(shape, a, horizon, 1.0, n=n, branch=branch)
            except AlphaOutsideBranch as exc:
                rec.update(status="skip", message=str(exc))
                out.append(rec)
                continue
            iters = int(round(horizon / step))
            cfg = FlowConfig(alpha=a, step=step, iterations=iters, allow_alpha_one=a == 1.0)
            w = run_flow(shape_graph(shape, 1.0, n), cfg).weights
            err = float(np.max(np.abs(w - exact)) / exact)
            rec.update(status="pass" if err <= tol else "fail", exact=exact, error=err,
                       branch="low" if a <= break_point(shape, n) else "high")
            out.append(rec)
    return out


def cmd_oracle_check(args):
    rows = oracle_table(args.step, args.horizon, args.alpha, args.branch, args.tol)
    print(f"{'shape':9s} {'alpha':>6s} {'branch':>6s} {'rel.err':>10s}  status")
    for r in rows:
        if r["status"] == "skip":
            print(f"{r['shape']:9s} {r['alpha']:6.3g} {'-':>6s} {'-':>10s}  skip: {r['message']}")
        else:
            print(f"{r['shape']:9s} {r['alpha']:6.3g} {r['branch']:>6s} {r['error']:10.3e}  {r['status']}")
    return EXIT_FAIL if any(r["status"] == "fail" for r in rows) else EXIT_OK


def cmd_metrics(args):
    pred = read_labels(args.pred)
    truth = read_labels(args.truth)
    if args.edges:
        g = load_graph(args.edges)
        tokens = g.labels
    else:
        g = None
        tokens = list(truth)
    p1 = Partition.from_labels(pred, tokens)
    p2 = Partition.from_labels(truth, tokens)
    t = contingency(p1, p2)
    out = {"ari": _num(ari(t)), "nmi": _num(nmi(t))}
    if g is not None:
        out["modularity"] = _num(modularity(g, p1))
    print(json.dumps(out))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="weightflow", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evolve weights, sweep surgery cutoffs, write CSV/JSON")
    r.add_argument("--input", required=True, help="edge list: 'u v [w]' per line")
    r.add_argument("--labels", help="ground truth: 'vertex label' per line")
    r.add_argument("--variant", default="one_evol", choices=[v.value for v in FlowVariant])
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--step", type=float, default=0.01)
    r.add_argument("--iters", type=int, default=20)
    r.add_argument("--sweep-resolution", type=int, default=200)
    r.add_argument("--modularity-on", default="surviving", choices=["surviving", "original"],
                   help="edges behind the modularity score (default: those left after the cut)")
    r.add_argument("--out", default="out")
    r.add_argument("--trace", action="store_true", help="also write per-iteration trace.csv")
    r.add_argument("--allow-alpha-one", action="store_true")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle-check", help="compare integrated flows with closed forms")
    o.add_argument("--step", type=float, default=0.01)
    o.add_argument("--horizon", type=float, default=1.0)
    o.add_argument("--alpha", type=float, action="append",
                   help="alpha to test on every shape (repeatable); default: two per branch")
    o.add_argument("--branch", choices=["low", "high"], help="require alpha to lie in this branch")
    o.add_argument("--tol", type=float, default=0.02)
    o.set_defaults(func=cmd_oracle_check)

    m = sub.add_parser("metrics", help="ARI/NMI (and modularity with --edges) of two labelings")
    m.add_argument("--pred", required=True)
    m.add_argument("--truth", required=True)
    m.add_argument("--edges")
    m.set_defaults(func=cmd_metrics)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputFormatError, VertexSetMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except WeightFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
