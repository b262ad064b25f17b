#!/usr/bin/env python3
"""Times the compiled trace-likelihood kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Workloads mirror the two regimes that dominate real runs: many single-trace
samples against the full byte model, and long trace vectors against the
reduced model.
"""

import argparse
import time

import numpy as np

from alphainfo import LeakageModel
from alphainfo.kernels import _fallback

try:
    from alphainfo.kernels import _core
except ImportError:
    _core = None

WORKLOADS = [
    ("bytes, q=1", 8, 50_000, 1),
    ("bytes, q=32", 8, 4_000, 32),
    ("nibbles, q=200", 4, 20_000, 200),
]


def time_backend(fn, texts, leaks, hw, sigma, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(texts, leaks, hw, sigma)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'workload':<18}{'samples':>9}{'python':>12}{'compiled':>12}"
          f"{'speedup':>9}")
    for name, bits, n, q in WORKLOADS:
        model = LeakageModel.for_bits(bits, sigma=1.0)
        m = model.key_cardinality
        texts = rng.integers(0, m, (n, q)).astype(np.int64)
        leaks = rng.normal(bits / 2, 1.5, (n, q))
        t_py = time_backend(_fallback.loglik_matrix, texts, leaks,
                            model.hw_table, 1.0, args.repeat)
        if _core is None:
            print(f"{name:<18}{n:>9}{t_py * 1e3:>10.1f}ms"
                  f"{'(not built)':>12}{'-':>9}")
            continue
        t_c = time_backend(_core.loglik_matrix, texts, leaks,
                           model.hw_table, 1.0, args.repeat)
        a = _core.loglik_matrix(texts, leaks, model.hw_table, 1.0)
        b = _fallback.loglik_matrix(texts, leaks, model.hw_table, 1.0)
        assert np.allclose(a, b, atol=1e-12)
        print(f"{name:<18}{n:>9}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms"
              f"{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
