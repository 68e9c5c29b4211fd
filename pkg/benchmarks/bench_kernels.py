#!/usr/bin/env python3
"""Median-microsecond comparison of the jit kernels vs the numpy fallback.

Run:  python3 benchmarks/bench_kernels.py
The same table is what VARNORM_NO_NUMBA=1 trades away.
"""

import time

import numpy as np

from varnorm import _kernels_nb as nb
from varnorm import _kernels_np as plain


def median_us(func, *args, iterations=300, warmup=5):
    for _ in range(warmup):
        func(*args)
    times = []
    for _ in range(iterations):
        start = time.perf_counter()
        func(*args)
        times.append(time.perf_counter() - start)
    return float(np.median(times)) * 1e6


def problem(n, seed=0):
    rng = np.random.default_rng(seed)
    m = rng.uniform(0.1, 1.0, n)
    p = rng.uniform(0.7, 5.0, n)
    q = rng.uniform(0.7, 5.0, n)
    v = np.exp(rng.normal(0.0, 1.5, n))
    return m, p, q, v


def main():
    print(f"{'kernel':<22}{'cells':>6}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for n in (16, 64, 256, 1024):
        m, p, q, v = problem(n)
        edges = np.concatenate(([0.0], np.cumsum(m)))
        prefixes = np.arange(1, n + 1, dtype=np.int64)
        order = np.argsort(-p)
        cases = (
            ("luxemburg", (m, p, v)),
            ("dyadic_mixed_modular", (m, p, q, v, 1.0, 1.0)),
            ("nested_indicator_norms", (m[order], p[order], prefixes)),
            ("hardy", (edges, v, 0.5)),
            ("maximal", (edges, v)),
        )
        for name, args in cases:
            t_nb = median_us(getattr(nb, name), *args)
            t_np = median_us(getattr(plain, name), *args)
            print(f"{name:<22}{n:>6}{t_np:>12.1f}{t_nb:>12.1f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
