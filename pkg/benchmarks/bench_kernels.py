"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

The numba functions are warmed up (compiled) before timing.  Each row reports
the best-of-repeat mean time per call for both backends.
"""

import argparse
import time

import numpy as np

from diplab import _kernels

Q = 2147483647


def best_time(fn, args_factory, calls, repeat):
    best = float("inf")
    for _ in range(repeat):
        batch = [args_factory() for _ in range(calls)]
        t0 = time.perf_counter()
        for args in batch:
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / calls)
    return best


def cases(rng):
    for k in (8, 64, 1024):
        a = rng.integers(0, Q, k, dtype=np.int64)
        b = rng.integers(0, Q, k, dtype=np.int64)
        yield f"inner_mod k={k}", "inner_mod", lambda a=a, b=b: (a, b, Q), 2000
    for k in (8, 64):
        x = rng.integers(0, Q, k, dtype=np.int64)
        m = rng.integers(0, Q, (k, k), dtype=np.int64)
        yield f"matvec_mod {k}x{k}", "matvec_mod", lambda x=x, m=m: (x, m, Q), 500
    for k in (2, 8, 32, 64):
        m = rng.integers(0, Q, (k, k + 1), dtype=np.int64)
        yield f"rref_mod {k}x{k + 1}", "rref_mod", lambda m=m: (m.copy(), Q), 50 if k >= 32 else 500


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    table = _kernels.backends()
    if "numba" not in table:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26}{'numpy (us)':>12}{'numba (us)':>12}{'speedup':>10}")
    for label, name, factory, calls in cases(rng):
        table["numba"][name](*factory())  # compile
        t_np = best_time(table["numpy"][name], factory, calls, args.repeat)
        t_nb = best_time(table["numba"][name], factory, calls, args.repeat)
        print(f"{label:<26}{t_np * 1e6:>12.2f}{t_nb * 1e6:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
