"""Compare the compiled and numpy kernels on the two hot loops.

    python benchmarks/bench_kernels.py [--repeat N] [--survey-q Q]

Prints one line per (kernel, backend) with the best wall time over the
repeats and the speed-up of the compiled backend.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from almostprime import kernels
from almostprime.lab import factor


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--start", type=int, default=10**8)
    ap.add_argument("--width", type=int, default=1 << 21)
    ap.add_argument("--survey-q", type=int, default=1000, help="upper modulus for the end-to-end survey")
    args = ap.parse_args()

    backends = kernels.available_backends()
    end = args.start + args.width
    base = factor.primes_below(math.isqrt(end) + 1)
    limit = 1 << 22
    omega = np.zeros(limit + 1, dtype=np.int8)
    omega[2:] = factor.build_factor_table(2, limit).omega
    moduli = (101, 997, 3001)

    results: dict[str, dict[str, float]] = {}
    for name, mod in backends.items():
        results.setdefault("factor_segment", {})[name] = best_of(
            lambda: mod.factor_segment(args.start, end, base), args.repeat
        )
        results.setdefault("first_hits", {})[name] = best_of(
            lambda: [mod.first_hits(omega, q, limit) for q in moduli], args.repeat
        )
        saved = kernels.factor_segment, kernels.first_hits
        kernels.factor_segment, kernels.first_hits = mod.factor_segment, mod.first_hits
        try:
            results.setdefault(f"survey q<={args.survey_q}", {})[name] = best_of(
                lambda: factor.survey(2, args.survey_q, 1.8345), 1
            )
        finally:
            kernels.factor_segment, kernels.first_hits = saved

    print(f"default backend: {kernels.BACKEND}")
    for kernel, by_backend in results.items():
        line = f"{kernel:<20}" + "".join(f"  {b}={t * 1e3:9.1f} ms" for b, t in by_backend.items())
        if {"cython", "python"} <= by_backend.keys():
            line += f"  speed-up x{by_backend['python'] / by_backend['cython']:.1f}"
        print(line)


if __name__ == "__main__":
    main()
