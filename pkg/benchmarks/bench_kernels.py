"""Compare the compiled and pure-Python kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs with the kernel module swapped in place, so everything
above the kernels is shared.
"""
import argparse
import time
from functools import lru_cache

from gmpy2 import mpq

from kpcohft import kernels
from kpcohft.series import ZSeries
from kpcohft.tau import build_tau, family_two, free_energy


def dense_product():
    a = ZSeries([mpq(k + 1, k + 2) for k in range(400)])
    b = ZSeries([mpq(-k, 3) for k in range(400)])
    for _ in range(5):
        a * b


@lru_cache(maxsize=None)
def sample_tau():
    d = family_two(mpq(3, 2), (0, 1), (1, mpq(1, 3)), order=13, hbar2_order=14)
    return build_tau(d, W=12, hcap=12)


def graded_log():
    free_energy(sample_tau())


def graded_square():
    Z = sample_tau()
    Z * Z


WORKLOADS = {"dense series product (n=400, x5)": dense_product,
             "log of a tau function, weight 12": graded_log,
             "square of a tau function, weight 12": graded_square}


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    found = kernels.backends()
    saved = kernels._impl
    sample_tau()
    print("%-36s %s" % ("workload", "  ".join("%10s" % name for name in sorted(found))))
    try:
        for label, fn in WORKLOADS.items():
            row = []
            for name in sorted(found):
                kernels._impl = found[name]
                row.append(timed(fn, args.repeat))
            print("%-36s %s" % (label, "  ".join("%9.3fs" % t for t in row)))
    finally:
        kernels._impl = saved


if __name__ == "__main__":
    main()
