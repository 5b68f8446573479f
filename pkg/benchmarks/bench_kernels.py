"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 3]

The pure fallback is slow, so it runs on ``n // scale`` and its time is
reported per element alongside the compiled one.
"""
import argparse
import timeit

import numpy as np

from expsum import _pycore
from expsum._backend import COMPILED, kernels
from expsum.characters import character
from expsum.complexsum import PhaseAngle


def cases(n):
    spf = kernels.linear_sieve(n)
    ppval = np.zeros(n + 1, dtype=np.complex128)
    ppval[1:] = np.exp(0.37j * np.arange(1, n + 1))
    chi = character(7, 1)
    mode, a, q, hi, lo = PhaseAngle.fixed(0x9E3779B97F4A7C15 << 64).kernel_args()
    rmode, ra, rq, rhi, rlo = PhaseAngle.rational(355, 1130).kernel_args()
    cps = np.array([n], dtype=np.int64)
    return {
        "linear_sieve": lambda k: k.linear_sieve(n),
        "multiplicative_fill": lambda k: k.multiplicative_fill(spf, ppval),
        "trajectory/fixed": lambda k: k.trajectory(chi.values, 7, mode, a, q, hi, lo, 0.0, False, cps),
        "trajectory/rational": lambda k: k.trajectory(chi.values, 7, rmode, ra, rq, rhi, rlo, 0.0, False, cps),
        "trajectory/twisted": lambda k: k.trajectory(chi.values, 7, mode, a, q, hi, lo, 2.5, False, cps),
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--scale", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not COMPILED:
        raise SystemExit("compiled core not available; build with pip install --no-build-isolation -e .")

    n_pure = max(args.n // args.scale, 10)
    fast = cases(args.n)
    slow = cases(n_pure)
    print(f"{'kernel':22s} {'compiled ns/elt':>16s} {'pure ns/elt':>12s} {'speedup':>8s}")
    for name in fast:
        tc = best(lambda: fast[name](kernels), args.repeat) / args.n * 1e9
        tp = best(lambda: slow[name](_pycore), args.repeat) / n_pure * 1e9
        print(f"{name:22s} {tc:16.1f} {tp:12.1f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
