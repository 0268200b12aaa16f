#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from srgkit import _kernels
from srgkit.reset_system import make_sore
from srgkit.simulator import Signal


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_winding(backend, rng):
    th = np.linspace(0, 2 * np.pi, 8192)
    contour = (1 + 0.3 * np.sin(5 * th)) * np.exp(-1j * th)
    contour[-1] = contour[0]
    probes = rng.uniform(-2, 2, 2048) + 1j * rng.uniform(-2, 2, 2048)
    return lambda: backend.winding_batch(contour, probes)


def bench_polyline(backend, rng):
    pa = np.cumsum(rng.normal(size=1500) + 1j * rng.normal(size=1500)) * 0.1
    pb = 20 + np.cumsum(rng.normal(size=1500) + 1j * rng.normal(size=1500)) * 0.1
    ma = np.ones(len(pa) - 1, dtype=np.int8)
    mb = np.ones(len(pb) - 1, dtype=np.int8)
    return lambda: backend.polyline_gap(pa, ma, pb, mb)


def bench_simulate(backend, rng):
    sys = make_sore(0.9)
    args = Signal.step(1.0)._kernel_args()
    empty = np.asarray(args[4], float)

    def run():
        backend.simulate_hybrid(
            sys.A, sys.B, sys.M, sys.R_J,
            args[0], args[1], args[2], args[3], empty, np.asarray(args[5], float),
            30.0, 1e-3, 1e-6, 1e-10, 10**6, np.zeros(2), 1e9,
        )

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    fallback = _kernels.get_backend("fallback")
    backends = [("fallback", fallback)]
    if _kernels.HAVE_COMPILED:
        backends.append(("compiled", _kernels.get_backend("compiled")))
    else:
        print("note: compiled kernels unavailable; showing fallback only")

    cases = [
        ("winding_batch (2048 probes x 8192 pts)", bench_winding),
        ("polyline_gap (1500 x 1500 segments)", bench_polyline),
        ("simulate_hybrid (30 s at dt 1e-3)", bench_simulate),
    ]
    print(f"{'kernel':<42} {'fallback':>12} {'compiled':>12} {'speedup':>9}")
    for label, make in cases:
        times = {}
        for name, be in backends:
            times[name] = timeit(make(be, rng), args.repeat)
        fb = times["fallback"]
        cp = times.get("compiled")
        speedup = f"{fb / cp:8.1f}x" if cp else "        -"
        cp_s = f"{cp * 1e3:10.2f}ms" if cp else "         -"
        print(f"{label:<42} {fb * 1e3:10.2f}ms {cp_s} {speedup}")


if __name__ == "__main__":
    main()
