"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each row times one workload on both backends and checks that they return
the same value.
"""

import argparse
import random
import sys
import time

from divpairs import _pykernels as py
from divpairs import kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def workloads():
    rng = random.Random(1)
    odd = [rng.randrange(1, 1 << 62) | 1 for _ in range(20000)]
    nums = [rng.randrange(1 << 40, 1 << 63) for _ in range(20000)]
    return [
        ("jacobi x20000", lambda k: [k.jacobi(n // 3, n) for n in odd]),
        ("is_prime x20000 (41-63 bit)", lambda k: [k.is_prime(n) for n in nums]),
        # period length 1358; the delta = 14 construction
        ("cf_period(73546514)", lambda k: k.cf_period(73546514)),
        # period length 2917952; the delta = 12, k = 1411 construction
        ("cf_period(2279895083614942)", lambda k: k.cf_period(2279895083614942)),
        ("scan_k delta=12, class 1411 mod 2440, k <= 1e8", lambda k: list(k.scan_k(12, 1411, 10**8, 2440))),
        ("scan_k delta=14, k = 2 mod 8, k <= 1e7", lambda k: list(k.scan_k(14, 2, 10**7, 8))),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.native is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'workload':<50} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, work in workloads():
        tc, out_c = best_of(lambda: work(kernels.native), args.repeat)
        tp, out_p = best_of(lambda: work(py), 1)
        if list(out_c) != list(out_p):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<50} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
