#!/usr/bin/env python3
"""Benchmark the compiled core against the numpy fallback on the three hot
workloads: vectorised entropy inversion, the randomized inequality batch,
and a composite convexity scan suite.

Run:  python benchmarks/bench_backends.py
"""

import math
import time

import numpy as np

from mgltk import _slowcore

try:
    from mgltk import _fastcore
except ImportError:
    _fastcore = None

LN2 = math.log(2.0)


def time_call(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workload_inverse(core):
    us = np.linspace(0.0, LN2, 1_000_000)
    return lambda: core.entropy_inv_array(us, 1e-13, 256)


def workload_batch(core):
    max_support = 8
    rng = np.random.Generator(np.random.Philox(key=42))
    raw = rng.random((100_000, 2 * max_support + 1))
    ks = 1 + np.minimum((raw[:, 0] * max_support).astype(np.int64),
                        max_support - 1)
    ps = raw[:, 2 * max_support]
    return lambda: core.mgl_gaps(raw, ks, ps, max_support, 1e-13, 256)


def workload_scan(core):
    lo = core.split_entropy_scalar(0.06)
    hi = core.split_entropy_scalar(0.5)
    us = np.linspace(lo, hi, 2001)

    def run():
        ts = core.split_entropy_inv_array(us, 1e-13, 128)
        for p in np.linspace(0.0, 0.5, 21):
            core.entropy_array(core.convolve_array(float(p), ts))
    return run


def main():
    workloads = [
        ("entropy_inv_array, 1e6 points", workload_inverse),
        ("mgl batch, 1e5 trials", workload_batch),
        ("claim1-style scan, 21 x 2001", workload_scan),
    ]
    cores = [("python", _slowcore)]
    if _fastcore is not None:
        cores.append(("cython", _fastcore))
    else:
        print("compiled core not available; benchmarking the fallback only")

    print(f"{'workload':36s}" + "".join(f"{name:>12s}" for name, _ in cores)
          + ("     speedup" if len(cores) == 2 else ""))
    for label, make in workloads:
        times = [time_call(make(core)) for _, core in cores]
        row = f"{label:36s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
