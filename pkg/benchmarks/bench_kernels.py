#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends on a parametric simplex integral.

    python3 benchmarks/bench_kernels.py [--samples N] [--repeat R]

Both backends must give the same estimate (they share the RNG streams);
the script prints per-backend timings and the speedup.
"""

import argparse
import time

from feyngraph import _kernels
from feyngraph.amplitude import Kinematics, integrate_simplex, parametric_integrand
from feyngraph.graphio import corpus_graph
from feyngraph.symanzik import QuadraticSpace


def case(name, dim):
    g = corpus_graph(name)
    verts = g.vertices
    kin = Kinematics.build(QuadraticSpace.euclidean(1), {verts[0]: (1,), verts[-1]: (-1,)}, [1] * g.n_edges, mass_sign=1)
    return parametric_integrand(g, dim, kin)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [("bubble", 2), ("wheel3", 2), ("wheel4", 2)]
    backends = [b for b in ("numpy", "numba") if b in _kernels.BACKENDS]
    print(f"{'graph':<8} {'backend':<7} {'best s':>8} {'value':>14}")
    for name, dim in cases:
        integrand = case(name, dim)
        best = {}
        for b in backends:
            _kernels.set_backend(b)
            integrate_simplex(integrand, "plain_mc", 1000, seed=0)  # warm-up / compile
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                est = integrate_simplex(integrand, "plain_mc", args.samples, seed=1)
                times.append(time.perf_counter() - t0)
            best[b] = min(times)
            print(f"{name:<8} {b:<7} {best[b]:8.3f} {est.value:14.8f}")
        if len(best) == 2:
            print(f"{name:<8} speedup {best['numpy'] / best['numba']:.2f}x")


if __name__ == "__main__":
    main()
