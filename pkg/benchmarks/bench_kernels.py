"""Timing of the compiled kernels against the numpy fallback.

scipy's ``linear_sum_assignment`` is timed alongside as an outside reference
and to cross-check optimal values.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]
"""

import argparse
import time

import numpy as np
from scipy.optimize import linear_sum_assignment

from randassign import _backend

SHAPES = [(20, 30), (50, 100), (100, 150), (200, 300), (400, 800)]


def best_time(fn, arg, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(arg)
        best = min(best, time.perf_counter() - start)
    return best


def scipy_min(cost):
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].sum()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-python-cells", type=int, default=200 * 300,
                        help="skip the fallback above this many cells")
    args = parser.parse_args()

    compiled = _backend.compiled_kernels
    python = _backend.python_kernels
    if compiled is None:
        print("compiled kernels unavailable; build with `python setup.py build_ext --inplace`")
    rng = np.random.default_rng(args.seed)

    header = f"{'shape':>10} {'kernel':>10} {'cython ms':>10} {'python ms':>10} {'scipy ms':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n, m in SHAPES:
        cost = rng.exponential(size=(n, m))
        ref = scipy_min(cost)
        t_scipy = best_time(scipy_min, cost, args.repeat)
        for name in ("lap_min", "greedy_max"):
            t_c = t_py = np.nan
            if compiled is not None:
                fn = getattr(compiled, name)
                t_c = best_time(fn, cost, args.repeat)
                if name == "lap_min":
                    col4row = np.asarray(fn(cost)[0])
                    assert abs(cost[np.arange(n), col4row].sum() - ref) < 1e-9 * n
            if n * m <= args.max_python_cells:
                t_py = best_time(getattr(python, name), cost, max(1, args.repeat // 2))
            speed = t_py / t_c if np.isfinite(t_py) and np.isfinite(t_c) else np.nan
            shown_scipy = f"{1e3 * t_scipy:9.3f}" if name == "lap_min" else f"{'':>9}"
            print(f"{n:>4}x{m:<5} {name:>10} {1e3 * t_c:10.3f} {1e3 * t_py:10.3f} {shown_scipy} "
                  f"{speed:8.1f}")


if __name__ == "__main__":
    main()
