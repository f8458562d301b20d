"""Compare the numba and numpy backends of the region fill kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from frobnd import _kernels
from frobnd._grid import Region
from frobnd.vecset import validate

CASES = [
    ("unit vectors, level 2000", [(1, 0), (0, 1)], 2, 2000),
    ("three generators, level 3000", [(3, 0), (1, 2), (0, 3)], 2, 3000),
    ("3-d, four generators, level 120", [(1, 0, 1), (2, 1, 0), (4, 0, 0), (0, 2, 0)], 3, 120),
    ("coins 2 and 3, level 10^6", [(2,), (3,)], 1, 10 ** 6),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'case':36s} {'points':>10s} {'kernel':>8s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, vecs, dim, cap in CASES:
        X = validate(vecs, dim)
        R = Region(X, X.vectors, cap=cap)
        for kernel in ("reach", "log"):
            fill = R.fill_reach if kernel == "reach" else R.fill_log
            a = fill(backend="numba")  # compile outside the timing
            b = fill(backend="numpy")
            if kernel == "reach":
                assert np.array_equal(a, b)
            else:
                assert np.allclose(a, b, rtol=1e-12, atol=1e-9, equal_nan=True)
            t_np = best_of(lambda: fill(backend="numpy"), args.repeat)
            t_nb = best_of(lambda: fill(backend="numba"), args.repeat)
            print(f"{name:36s} {R.points.size:10d} {kernel:>8s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
