"""Time the numba kernels against the numpy/scipy fallback.

    python benchmarks/bench_kernels.py [--sizes 34 115 300] [--repeat 3]

Each row reports the best of ``--repeat`` wall-clock runs per kernel on a
random connected graph with about six edges per vertex. Numba compilation
happens once before timing.
"""
import argparse
import time

import numpy as np

from weightflow.graph import build_graph
from weightflow.kernels import backend_module


def random_graph(rng, n, per_vertex=6):
    pairs = set()
    order = rng.permutation(n)
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(k)])
        pairs.add((min(u, v), max(u, v)))
    while len(pairs) < min(per_vertex * n // 2, n * (n - 1) // 2):
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((min(u, v), max(u, v)))
    return build_graph([(u, v, float(rng.uniform(0.5, 1.5))) for u, v in sorted(pairs)])


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(g, impl, repeat):
    w = g.csr_weights()
    out = {}
    out["apsp"] = best_of(lambda: impl.apsp(g.indptr, g.indices, w, g.n), repeat)
    D = impl.apsp(g.indptr, g.indices, w, g.n)
    for kind in ("one_step", "two_step"):
        build = getattr(impl, f"{kind}_measures")
        out[f"{kind} measures"] = best_of(lambda: build(g.indptr, g.indices, w, 0.5), repeat)
        ptr, idx, mass = build(g.indptr, g.indices, w, 0.5)
        out[f"{kind} edge W"] = best_of(lambda: impl.edge_costs(D, ptr, idx, mass, g.eu, g.ev), repeat)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[34, 115, 300])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    nb, npy = backend_module("numba"), backend_module("numpy")
    bench(random_graph(rng, 8), nb, 1)  # compile

    print(f"{'n':>5} {'m':>6} {'kernel':<20} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        g = random_graph(rng, n)
        a = bench(g, nb, args.repeat)
        b = bench(g, npy, args.repeat)
        for k in a:
            print(f"{g.n:5d} {g.m:6d} {k:<20} {a[k]:10.4f} {b[k]:10.4f} {b[k] / a[k]:8.1f}")


if __name__ == "__main__":
    main()
