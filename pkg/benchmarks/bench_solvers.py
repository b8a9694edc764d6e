#!/usr/bin/env python3
"""Timing comparison of the displacement-solver kernels.

Runs the generator-driven triangularization in its compiled form (Cython
extension) and in the pure numpy fallback, against dense Cholesky of the
assembled matrix, across system sizes.  All three paths must agree; the
table shows where the structured O(m n^2) route starts paying off and what
the compiled kernel buys over the fallback.

Usage:  python benchmarks/bench_solvers.py [--sizes 64,128,256,512] [--rank 4]
"""

import argparse
import time

import numpy as np

import specfact._schur as schur_py
from specfact import dense_from_generator, DisplacementGenerator

try:
    import specfact._schurext as schur_ext
except ImportError:
    schur_ext = None


def random_generator(rng, n, m):
    cols = 0.3 * (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)))
    cols[:, -1] = 0.0
    cols[-1, -1] = 1.0
    return DisplacementGenerator(columns=cols)


def timeit(fn, repeats=5):
    best = np.inf
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,128,256,512,1024")
    parser.add_argument("--rank", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    print(f"generator rank m = {args.rank}; times are best of {args.repeats}")
    header = f"{'n':>6} {'dense chol':>12} {'pure schur':>12} {'compiled':>12} {'agree':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        gen = random_generator(rng, n, args.rank)
        dense = dense_from_generator(gen)
        flipped = gen.columns[::-1]

        t_dense, ref = timeit(lambda: np.linalg.cholesky(dense), args.repeats)
        t_pure, l_pure = timeit(
            lambda: schur_py.schur_cholesky(flipped), args.repeats
        )
        rebuilt = (l_pure @ l_pure.conj().T)[::-1, ::-1]
        err = np.abs(rebuilt - dense).max() / np.abs(dense).max()
        if schur_ext is not None:
            t_ext, l_ext = timeit(
                lambda: schur_ext.schur_cholesky(flipped), args.repeats
            )
            err = max(err, np.abs(l_ext - l_pure).max() / np.abs(l_pure).max())
            ext_col = f"{t_ext * 1e3:>10.2f}ms"
        else:
            ext_col = f"{'n/a':>12}"
        print(
            f"{n:>6} {t_dense * 1e3:>10.2f}ms {t_pure * 1e3:>10.2f}ms "
            f"{ext_col} {err:>9.1e}"
        )


if __name__ == "__main__":
    main()
