"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Kernel rows call both modules directly on the same inputs and also report
the largest disagreement. The end-to-end rows time one acceptance-grid sweep
of ``apply`` in a subprocess per backend, selected with DUNKL_APPROX_BACKEND.
"""

import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from dunkl_approx import _kernels_py

try:
    from dunkl_approx import _kernels as compiled
except ImportError:
    compiled = None

SWEEP = """
import itertools, time
from dunkl_approx import BACKEND, OperatorConfig, apply
from dunkl_approx.presets import PRESETS
f = PRESETS["sin"].target
t0 = time.perf_counter()
for n, mu, a, lam in itertools.product((5, 10, 50, 100), (0, 0.5, 1), (0, 0.5), (0, 1)):
    cfg = OperatorConfig("HermiteGamma", n, mu, a, lam)
    for i in range(9):
        apply(cfg, f, 0.25 * i)
print(BACKEND, time.perf_counter() - t0)
"""


def cases(mod):
    lg = mod.log_gamma_nu_table(0.5, 400)
    weights = np.exp(-0.5 * (np.arange(120) - 60.0) ** 2 / 60.0)
    weights /= weights.sum()
    shapes = np.arange(120) + 1.5
    return {
        "log_gamma x 10k": lambda: [mod.log_gamma(0.5 + 0.37 * i) for i in range(10_000)],
        "log_gamma_nu_table k<=20k": lambda: mod.log_gamma_nu_table(0.5, 20_000),
        "hermite_log_coeffs k<=400": lambda: mod.hermite_log_coeffs(lg, math.log(0.5), math.log(20.0), 400),
        "dunkl_neg_logterms k<=400": lambda: mod.dunkl_neg_logterms(lg, 0.5, math.log(20.0), 400),
        "gamma_mixture sin, 120 terms": lambda: mod.gamma_mixture(
            math.sin, weights, shapes, 10.0, 40.0, 0.0, 1e-12, 1e-12, 200,
            _kernels_py.ENV_BOUNDED, 1.0, 1.0, 0.0, 1e-17),
    }


def disagreement(a, b):
    a, b = np.asarray(a, dtype=float).ravel(), np.asarray(b, dtype=float).ravel()
    finite = np.isfinite(a) & np.isfinite(b)
    if not np.array_equal(np.isfinite(a), np.isfinite(b)):
        return math.inf
    scale = np.maximum(1.0, np.abs(b[finite]))
    return float(np.max(np.abs(a[finite] - b[finite]) / scale, initial=0.0))


def first(v):
    return v[0] if isinstance(v, tuple) else v


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-sweep", action="store_true")
    args = ap.parse_args(argv)

    py = cases(_kernels_py)
    cy = cases(compiled) if compiled is not None else {}
    print(f"{'kernel':32} {'python ms':>11} {'compiled ms':>12} {'speedup':>8} {'max diff':>9}")
    for name, fn in py.items():
        t_py = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        if name in cy:
            t_cy = min(timeit.repeat(cy[name], number=1, repeat=args.repeat)) * 1e3
            diff = disagreement(first(cy[name]()), first(fn()))
            print(f"{name:32} {t_py:11.3f} {t_cy:12.3f} {t_py / t_cy:8.1f} {diff:9.1e}")
        else:
            print(f"{name:32} {t_py:11.3f} {'n/a':>12}")

    if args.skip_sweep:
        return 0
    print("\nend-to-end: sin over the 432-point HermiteGamma grid")
    for backend in ("python", "compiled"):
        if backend == "compiled" and compiled is None:
            print("compiled     n/a (extension not built)")
            continue
        env = dict(os.environ, DUNKL_APPROX_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"{out[0]:12} {float(out[1]):8.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
