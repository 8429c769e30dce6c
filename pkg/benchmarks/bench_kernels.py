"""Compare the numba and numpy paths of the integer kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is run once untimed (numba compiles or loads its cache), then
timed over N repeats; results from both backends are checked for equality.
"""
import argparse
import time

import numpy as np

from tvar import _kernels


def _best(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    # lattice scan of a 4-dimensional cross-polytope of radius 7
    n = 4
    A = []
    for signs in np.ndindex(*(2,) * n):
        A.append([-1 if s else 1 for s in signs])
    A = np.array(A) * -1
    b = [-7] * len(A)
    yield "scan_halfspaces (4d, radius 7)", lambda be: _kernels.scan_halfspaces(A, b, [-7] * n, [7] * n, be)

    # fiber lattice points of a realization fiber: 7 points, total 12
    yield "compositions (12 into 7)", lambda be: _kernels.compositions(12, 7, be)

    # Gorenstein oracle: rank-3 cone, 20 candidates, radius 6
    N = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]
    C = [(i % 3, (i // 3) % 3, i % 2) for i in range(20)]
    yield "shift_mismatches (rank 3, r=6, 20 cands)", lambda be: _kernels.shift_mismatches(N, C, 6, be)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path runs")
    print(f"{'kernel':<42} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, run in cases():
        t_np, r_np = _best(lambda: run("numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            t_nb, r_nb = _best(lambda: run("numba"), args.repeat)
            same = np.array_equal(np.asarray(r_np), np.asarray(r_nb))
            print(f"{name:<42} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x"
                  + ("" if same else "  MISMATCH"))
        else:
            print(f"{name:<42} {t_np * 1e3:>8.2f}ms {'-':>10}")


if __name__ == "__main__":
    main()
