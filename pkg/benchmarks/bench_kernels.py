"""Benchmark the compiled integration loops against the pure-Python twin.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeats R]

Times each closed-loop kernel on a representative workload for every
importable backend and prints per-step cost plus the compiled speedup.
"""

import argparse
import math
import time

import numpy as np

from liepid.kernels import available_backends

CASES = {
    "pendulum_loop": lambda n: (0.0, 0.0, 0.0, 1.0, 100.0, 1000.0, 1.0, 600.0,
                                math.pi / 2, 1e-3, n),
    "vehicle_nominal_loop": lambda n: (0.0, 0.0, 0.0, 1.0, 0.1, 1.0, 1.0,
                                       0.0, 0.0, 0.0, 0.0, 1e-3, n),
    "vehicle_integral_loop": lambda n: (0.0, 0.0, 0.0, 0.0, 1.0, 0.1, 1.0, 1.0,
                                        0.1, 0.0, 0.0, 0.0, 0.0, 1e-3, n),
    "rotating_frame_loop": lambda n: (0.1, -0.2, 0.0, 1.0, 0.1, 1.0, 1.0, 0.1,
                                      1e-3, n),
}


def time_call(fn, args, repeats):
    best = math.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}   steps={args.steps}\n")
    header = f"{'kernel':<24}" + "".join(f"{name + ' (ns/step)':>22}"
                                         for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)

    for kernel, make_args in CASES.items():
        call_args = make_args(args.steps)
        row = f"{kernel:<24}"
        times = {}
        results = {}
        for name, module in backends.items():
            best, result = time_call(getattr(module, kernel), call_args,
                                     args.repeats)
            times[name] = best
            results[name] = result
            row += f"{best / args.steps * 1e9:>22.0f}"
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:>9.1f}x"
            if not np.array_equal(results["python"], results["cython"]):
                row += "  (MISMATCH)"
        print(row)


if __name__ == "__main__":
    main()
