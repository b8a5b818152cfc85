"""Benchmark the compiled kernels against the pure-Python twins.

Both backends produce bit-identical results (enforced by
tests/test_backends.py); this script only measures speed.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 20,50,100,200] [--repeats 5]
"""

import argparse
import time

import numpy as np

from corefeval import _pykernels

try:
    from corefeval import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_solve_dense(n, repeats, rng):
    matrix = rng.uniform(-0.2, 1.0, size=(n, n))
    rows = {}
    for name, impl in (("pure", _pykernels), ("compiled", _ckernels)):
        if impl is None:
            continue
        rows[name] = _time(lambda impl=impl: impl.solve_dense(matrix),
                           repeats)
    return rows


def bench_agglomerate(n, repeats, rng):
    sim = np.triu(rng.uniform(0.0, 1.0, size=(n, n)), k=1)
    sim = sim + sim.T
    rank = np.arange(n, dtype=np.int64)
    rows = {}
    for name, impl in (("pure", _pykernels), ("compiled", _ckernels)):
        if impl is None:
            continue
        rows[name] = _time(
            lambda impl=impl: impl.agglomerate(sim, rank, 0, 0.7, 1),
            repeats)
    return rows


def _report(kernel, n, rows):
    pure = rows.get("pure")
    compiled = rows.get("compiled")
    line = f"{kernel:<14} n={n:<5} pure {pure * 1e3:9.3f} ms"
    if compiled is not None:
        line += (f"   compiled {compiled * 1e3:9.3f} ms"
                 f"   speedup {pure / compiled:6.1f}x")
    else:
        line += "   compiled (not built)"
    print(line)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,50,100,200",
                        help="comma-separated problem sizes")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats, best of (default: 5)")
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    for n in sizes:
        _report("solve_dense", n, bench_solve_dense(n, args.repeats, rng))
    for n in sizes:
        _report("agglomerate", n, bench_agglomerate(n, args.repeats, rng))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
