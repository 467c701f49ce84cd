"""Compare the numba and pure-numpy exact 1-D k-means kernels.

    python benchmarks/bench_kernels.py [--sizes 1000 12000 50000] [--k 5 10 15]

Both kernels are timed directly, regardless of SETA_DISABLE_NUMBA. The
split tables are checked for identical cluster assignments.
"""

import argparse
import time

import numpy as np

from seta import _accel
from seta.clustering import _kernels


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 12000, 50000])
    ap.add_argument("--k", type=int, nargs="+", default=[5, 10, 15])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if not _accel.NUMBA_AVAILABLE:
        print("numba not installed; only the numpy kernel can run")
    rng = np.random.default_rng(0)
    print(f"{'n':>7} {'k':>3} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in args.sizes:
        # cross-entropy-like: heavy right tail
        x, counts = np.unique(rng.gamma(0.5, size=n), return_counts=True)
        sums = _kernels.prefix_sums(x, counts.astype(float))
        for k in args.k:
            t_np, opt_np = best_of(lambda: _kernels.dp_split_table_numpy(*sums, k), args.repeats)
            if _accel.NUMBA_AVAILABLE:
                _kernels.dp_split_table_numba(*sums, k)  # compile / load cache
                t_nb, opt_nb = best_of(lambda: _kernels.dp_split_table_numba(*sums, k), args.repeats)
                same = np.array_equal(_kernels.backtrack(opt_np, x.size), _kernels.backtrack(opt_nb, x.size))
                assert same, "kernels disagree"
                print(f"{n:>7} {k:>3} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x")
            else:
                print(f"{n:>7} {k:>3} {t_np * 1e3:>10.2f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
