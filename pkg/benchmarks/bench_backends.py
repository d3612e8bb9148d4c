"""Time a few representative workloads under each rational backend.

Each backend runs in a fresh interpreter (the backend is fixed at import
time and all caches start cold).  Usage::

    python3 benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "K3 genus, Q=6": "ell_smooth(formal_surface(0, 24), 6)",
    "P2 genus, Q=6": "ell_smooth(projective_space(2), 6)",
    "P2/Z3 orbifold genus, Q=3": "ell_orbifold(toric_fixed_data(P2, QuotientData(((1, 1), (-1, 2)))), 3)",
    "DMVV for P1, p^3 q^3": "dmvv_check(projective_space(1), 3, 3)",
    "quartic K3 hypersurface, Q=3": "cy_hypersurface(P3, None, 3)",
}

CHILD = r"""
import json, sys, time
from ellgenus.cohom import formal_surface, projective_space
from ellgenus.dmvv import dmvv_check
from ellgenus.exactnum import BACKEND
from ellgenus.genuscore import cy_hypersurface, ell_smooth
from ellgenus.orbifold import ell_orbifold
from ellgenus.toricgeo import Fan, QuotientData, toric_fixed_data

P2 = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
P3 = Fan(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)), ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
t0 = time.perf_counter()
eval(sys.argv[1])
print(json.dumps({"backend": BACKEND, "seconds": time.perf_counter() - t0}))
"""


def run(backend: str, expr: str) -> dict:
    env = dict(os.environ, ELLGENUS_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", CHILD, expr], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="runs per workload and backend (best is reported)")
    args = ap.parse_args()
    print(f"{'workload':32s} {'gmpy2':>9s} {'python':>9s} {'ratio':>7s}")
    for name, expr in WORKLOADS.items():
        best = {}
        for backend in ("gmpy2", "python"):
            runs = [run(backend, expr) for _ in range(args.repeat)]
            if runs[0]["backend"] != backend:
                print(f"{name:32s} backend {backend} unavailable, got {runs[0]['backend']}")
                return 1
            best[backend] = min(r["seconds"] for r in runs)
        ratio = best["python"] / best["gmpy2"] if best["gmpy2"] else float("nan")
        print(f"{name:32s} {best['gmpy2']:8.3f}s {best['python']:8.3f}s {ratio:6.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
