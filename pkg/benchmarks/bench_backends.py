#!/usr/bin/env python3
"""Time the compiled gravitation kernel against the NumPy backend.

The aggregation is the pipeline's hot loop: O(k^2) pairwise distances
feeding O(k^2 * m) signed sums. Run as:

    python benchmarks/bench_backends.py [--sizes 500,1000,2000] [--lfs 4]
"""

import argparse
import time

import numpy as np

from gravlabel.backend import available_backends
from gravlabel.distances import METRICS, MetricSpec, mahalanobis_precompute
from gravlabel.lf import LabelMatrix
from gravlabel.reinforce import ReinforceParams, aggregate_effects

def run(k, n, m, kind, backend, repeats=3):
    from gravlabel.data import Dataset

    rng = np.random.default_rng(k + n + m)
    X = rng.random((k, n))
    entries = rng.choice([-1, 0, 1], size=(k, m),
                         p=[0.7, 0.1, 0.2]).astype(np.int8)
    d = Dataset(kind="numeric",
                feature_names=tuple(f"f{j}" for j in range(n)),
                X=X, point_ids=np.arange(k, dtype=np.int64))
    mat = LabelMatrix(entries=entries,
                      lf_names=tuple(f"l{j}" for j in range(m)))
    inv_cov = mahalanobis_precompute(X) if kind == "mahalanobis" else None
    params = ReinforceParams(metric=MetricSpec(kind, inv_cov=inv_cov),
                             mode="fixed_epsilon", epsilon=1.0)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        effects = aggregate_effects(mat, d, params, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, float(np.abs(effects).sum())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="500,1000,2000")
    parser.add_argument("--features", type=int, default=12)
    parser.add_argument("--lfs", type=int, default=4)
    parser.add_argument("--metrics", default="euclidean,chebyshev,cosine")
    args = parser.parse_args()

    backends = available_backends()
    sizes = [int(s) for s in args.sizes.split(",")]
    kinds = [kind.strip() for kind in args.metrics.split(",")]
    for kind in kinds:
        if kind not in METRICS:
            raise SystemExit(f"unknown metric {kind}")

    print(f"backends: {', '.join(backends)}   "
          f"(n={args.features}, m={args.lfs})")
    header = f"{'metric':<12} {'k':>6} " + "".join(
        f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kind in kinds:
        for k in sizes:
            times = {}
            checks = set()
            for backend in backends:
                seconds, checksum = run(k, args.features, args.lfs, kind,
                                        backend)
                times[backend] = seconds
                checks.add(round(checksum, 6))
            row = f"{kind:<12} {k:>6} " + "".join(
                f"{times[b] * 1000:>10.1f}ms" for b in backends)
            if len(backends) == 2:
                row += f"{times['python'] / times['cython']:>9.2f}x"
            if len(checks) != 1:
                row += "   [backends disagree!]"
            print(row)


if __name__ == "__main__":
    main()
