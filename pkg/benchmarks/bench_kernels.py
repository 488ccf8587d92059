"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernels.py [--sizes 40 80 160] [--density 0.1] [--repeat 3]

Both kernels run on the same random sparse integer matrices; results are
checked for equality before timings are reported. The fallback column says
whether the compiled kernel hit int64 overflow and redid the call in Python,
in which case the two timings are expected to match.
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from gysinkit.algebra import _backend
from gysinkit.scenarios import disc_bundle, riemann_surface, run_scenario, torus_base


def random_rows(rng, n, density):
    rows = []
    for _ in range(n):
        row = {j: Fraction(rng.randint(-3, 3)) for j in range(n) if rng.random() < density}
        rows.append({j: v for j, v in row.items() if v})
    return rows


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--density", type=float, default=0.1)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    py, cy = _backend.python_kernel, _backend.compiled_kernel
    if cy is None:
        print("compiled kernel not built; only the Python fallback is available")
    rng = random.Random(args.seed)
    print(f"{'size':>6} {'op':>5} {'python s':>10} {'cython s':>10} {'speedup':>8}  fallback")
    for n in args.sizes:
        rows = random_rows(rng, n, args.density)
        for op in ("rank", "rref"):
            t_py = best_of(lambda: getattr(py, op)(list(rows), n), args.repeat)
            if cy is None:
                print(f"{n:>6} {op:>5} {t_py:>10.4f} {'-':>10} {'-':>8}")
                continue
            assert getattr(py, op)(list(rows), n) == getattr(cy, op)(list(rows), n)
            before = cy.stats["fallbacks"]
            t_cy = best_of(lambda: getattr(cy, op)(list(rows), n), args.repeat)
            fell = "yes" if cy.stats["fallbacks"] > before else "no"
            print(f"{n:>6} {op:>5} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>8.1f}  {fell}")

    scenarios = [riemann_surface(0, 40), disc_bundle(torus_base(), 20)]
    for sc in scenarios:
        timings = {}
        for name, kern in (("python", py), ("cython", cy)):
            if kern is None:
                continue
            saved = _backend.kernel
            _backend.kernel = kern
            try:
                timings[name] = best_of(lambda: run_scenario(sc), args.repeat)
            finally:
                _backend.kernel = saved
        cells = "  ".join(f"{k} {v:.3f}s" for k, v in timings.items())
        print(f"pipeline {sc.name} ({len(sc.orbit_set.orbits)} orbits): {cells}")


if __name__ == "__main__":
    main()
