"""Compare the compiled grid sign kernel against the numpy fallback.

Run with ``python benchmarks/bench_grid.py [--sizes 128 256 512] [--repeat 3]``.
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from milnorfibre import _gridkernel_py
from milnorfibre.fibre import _Grid
from milnorfibre.polycore import parse_poly

try:
    from milnorfibre import _gridkernel
except ImportError:
    _gridkernel = None

GERMS = ("x*y", "y^2-x^3", "x^3-3*x*y^2", "y^3-x^5+x^2*y^2")


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _gridkernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'germ':<20}{'R':>6}{'nodes':>10}{'compiled ms':>14}{'numpy ms':>12}{'speedup':>10}")
    for text in GERMS:
        f = parse_poly(text)
        for R in args.sizes:
            g = _Grid(f, Fraction(1, 2), R)
            call = (g.coeffs, g.ex, g.ey, g.xs, g.xs, 1e-3, g.rel_err)
            tc, oc = best_time(lambda: _gridkernel.classify(*call), args.repeat)
            tp, op = best_time(lambda: _gridkernel_py.classify(*call), args.repeat)
            if not np.array_equal(np.asarray(oc), op):
                raise SystemExit(f"kernels disagree on {text} at R={R}")
            n = len(g.xs) ** 2
            print(f"{text:<20}{R:>6}{n:>10}{tc * 1e3:>14.2f}{tp * 1e3:>12.2f}{tp / tc:>10.1f}x")


if __name__ == "__main__":
    main()
