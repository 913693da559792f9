"""Compiled vs pure-numpy kernels: per-atom discriminator search and margin line search.

    python3 benchmarks/bench_kernels.py [--atoms 20000] [--etas 2000] [--repeat 3]

Prints best-of-repeat wall time per backend and the max disagreement.
"""

import argparse
import math
import time

import numpy as np

from alphagan import _kernels_py

try:
    from alphagan import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat):
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=20_000)
    ap.add_argument("--etas", type=int, default=2_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _kernels is None:
        raise SystemExit("compiled extension not built; run pip install -e . --no-build-isolation")

    rng = np.random.default_rng(0)
    a = rng.dirichlet(np.ones(8), size=args.atoms // 8).ravel()
    b = rng.dirichlet(np.ones(8), size=args.atoms // 8).ravel()
    eta = rng.uniform(0.001, 0.999, size=args.etas)

    print(f"{'kernel':<28}{'cython s':>10}{'python s':>10}{'speedup':>9}{'max diff':>11}")
    cases = [(f"argmax alpha={al}", lambda m, al=al: m.brute_force_argmax(a, b, al, 1001))
             for al in (0.3, 1.0, 7.0, math.inf)]
    cases += [(f"margin alpha={al}", lambda m, al=al: m.margin_golden(eta, al)[1])
              for al in (0.5, 2.0, 10.0)]
    for name, fn in cases:
        tc, oc = best_time(lambda: fn(_kernels), args.repeat)
        tp, op = best_time(lambda: fn(_kernels_py), args.repeat)
        diff = float(np.max(np.abs(oc - op)))
        print(f"{name:<28}{tc:>10.4f}{tp:>10.4f}{tp / tc:>8.1f}x{diff:>11.2e}")


if __name__ == "__main__":
    main()
