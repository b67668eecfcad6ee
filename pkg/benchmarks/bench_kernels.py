"""Compare the compiled and pure-Python series kernels.

Two measurements:

* ``mul_terms`` on dense truncated series, calling each backend module directly;
* an end-to-end Todd-coefficient computation, run once per backend in a fresh
  interpreter so that the import-time backend switch takes effect.

Usage: ``python benchmarks/bench_kernels.py [--repeat N] [--order T]``
"""
import argparse
import os
import subprocess
import sys
import timeit
from fractions import Fraction

from eqtodd import _kernels_py
from eqtodd.series import B_series, LinearForm

try:
    from eqtodd import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = """
import time
from eqtodd import BACKEND, todd
from eqtodd.complement import InnerProductMap
from eqtodd.lattice_geom import ConeData
todd.set_cache_enabled(False)
cone = ConeData(((1, 0, 0), (0, 1, 0), (1, 2, 5)))
psi = InnerProductMap([[2, 1, 0], [1, 2, 1], [0, 1, 3]])
t = time.perf_counter()
todd.r_general(cone, psi, {order})
print(BACKEND, time.perf_counter() - t)
"""


def operands(order):
    a = B_series(LinearForm((1, Fraction(-1, 2), 2)), order) * B_series(LinearForm((0, 3, -1)), order)
    b = B_series(LinearForm((Fraction(1, 3), 1, 1)), order)
    return dict(a.terms), dict(b.terms), 3, order


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def end_to_end(order, pure):
    env = dict(os.environ)
    env.pop("EQTODD_PURE_PYTHON", None)
    if pure:
        env["EQTODD_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(order=order)],
                         env=env, capture_output=True, text=True, check=True)
    name, secs = out.stdout.split()
    return name, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--order", type=int, default=10, help="truncation order of the kernel operands")
    ap.add_argument("--e2e-order", type=int, default=6, help="order of the end-to-end computation")
    args = ap.parse_args(argv)

    a, b, n, order = operands(args.order)
    print(f"mul_terms: {len(a)} x {len(b)} terms, {n} variables, order {order}")
    py = best_of(lambda: _kernels_py.mul_terms(a, b, n, order), args.repeat)
    print(f"  python  {py * 1e3:9.3f} ms")
    if _ckernels is None:
        print("  cython  not built")
    else:
        assert _ckernels.mul_terms(a, b, n, order) == _kernels_py.mul_terms(a, b, n, order)
        cy = best_of(lambda: _ckernels.mul_terms(a, b, n, order), args.repeat)
        print(f"  cython  {cy * 1e3:9.3f} ms   speedup {py / cy:.2f}x")

    print(f"r_general on a multiplicity-5 cone, order {args.e2e_order}, cache off")
    results = [end_to_end(args.e2e_order, pure) for pure in (True, False)]
    for name, secs in results:
        print(f"  {name:7} {secs:9.3f} s")
    if results[1][0] != results[0][0]:
        print(f"  speedup {results[0][1] / results[1][1]:.2f}x")


if __name__ == "__main__":
    main()
