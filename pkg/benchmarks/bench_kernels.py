"""Timing comparison of the compiled and numpy hit-and-run kernels.

Both kernels consume identical pre-drawn randomness, so their outputs are
bitwise equal; the benchmark checks that while timing the chain on the cube
{|x_i| <= 1} at several dimensions.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeat R] [--dims ...]
"""

import argparse
import time

import numpy as np

from simplexfit.kernels import get_kernel


def cube_hrep(n):
    A = np.vstack([np.eye(n), -np.eye(n)])
    b = np.ones(2 * n)
    return A, b


def run_once(kernel, A, b, directions, fractions, burn_in, thin, n_out):
    n = A.shape[1]
    out = np.empty((n_out, n))
    t0 = time.perf_counter()
    kernel(A, b, np.zeros(n), directions, fractions, burn_in, thin, out)
    return time.perf_counter() - t0, out


def bench(dims, steps, repeat, seed):
    burn_in, thin = 1000, 50
    n_out = (steps - burn_in) // thin
    total = burn_in + thin * n_out
    rng = np.random.default_rng(seed)

    try:
        kernel_c = get_kernel("c")
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return

    kernel_py = get_kernel("py")
    print("hit-and-run kernel, cube H-rep, %d steps (best of %d)"
          % (total, repeat))
    print("%4s %6s %12s %12s %9s" % ("n", "rows", "c [s]", "numpy [s]",
                                     "speedup"))
    for n in dims:
        A, b = cube_hrep(n)
        directions = rng.standard_normal((total, n))
        fractions = rng.random(total)
        best = {}
        for name, kernel in (("c", kernel_c), ("py", kernel_py)):
            times = []
            for _ in range(repeat):
                dt, out = run_once(kernel, A, b, directions, fractions,
                                   burn_in, thin, n_out)
                times.append(dt)
                best.setdefault(name + "_out", out)
            best[name] = min(times)
        assert np.array_equal(best["c_out"], best["py_out"]), \
            "backends disagree"
        print("%4d %6d %12.4f %12.4f %8.1fx"
              % (n, 2 * n, best["c"], best["py"], best["py"] / best["c"]))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=60_000,
                    help="chain steps per run (default 60000)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="repetitions, best time kept (default 3)")
    ap.add_argument("--dims", type=int, nargs="+",
                    default=[2, 4, 8, 16, 32])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    bench(args.dims, args.steps, args.repeat, args.seed)


if __name__ == "__main__":
    main()
