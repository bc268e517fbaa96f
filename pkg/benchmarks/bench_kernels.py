"""Compare the compiled kernels with the numpy fallback.

Times the three hot paths (Bessel evaluation, the dense Hankel matrix and
the spherical-mean kernel matrix) on both backends, checks that they
agree, and prints a table.  Run with ``python3 benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from loguncert import kernels
from loguncert.radial import make_grid


def _cases(n: int, d: int):
    grid = make_grid(d, 12.0, n)
    r = grid.nodes
    nu = 0.5 * (d - 2)
    z = np.outer(r, r).ravel()
    tables = kernels.angular_tables(d)

    def bessel(mod):
        return mod.scaled_bessel(nu, z)

    def hankel(mod):
        return mod.hankel_matrix(nu, r, r)

    def riesz(mod):
        return mod.kernel_matrix(0, 0.5 * d, r, *tables, kernels.FAR_THRESHOLD)

    def log(mod):
        return mod.kernel_matrix(1, 0.0, r, *tables, kernels.FAR_THRESHOLD)

    return {"scaled_bessel": bessel, "hankel_matrix": hankel,
            "kernel_matrix[riesz]": riesz, "kernel_matrix[log]": log}


def run(n: int, d: int, repeat: int) -> list[dict]:
    try:
        compiled = kernels.backend("compiled")
    except ImportError:
        compiled = None
    numpy_impl = kernels.backend("numpy")
    rows = []
    for name, fn in _cases(n, d).items():
        t_np = min(timeit.repeat(lambda: fn(numpy_impl), number=1, repeat=repeat))
        row = {"kernel": name, "n": n, "d": d, "numpy_s": t_np}
        if compiled is not None:
            t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=repeat))
            a, b = fn(compiled), fn(numpy_impl)
            scale = max(1.0, float(np.max(np.abs(b))))
            row.update(compiled_s=t_c, speedup=t_np / t_c,
                       max_rel_diff=float(np.max(np.abs(a - b))) / scale)
        rows.append(row)
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--resolution", type=int, default=1024)
    parser.add_argument("--dimension", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = parser.parse_args(argv)
    rows = run(args.resolution, args.dimension, args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return 0
    print(f"active backend: {kernels.BACKEND}   n = {args.resolution}, d = {args.dimension}")
    print(f"{'kernel':<22} {'numpy [s]':>11} {'compiled [s]':>13} {'speedup':>9} {'max diff':>10}")
    for row in rows:
        if "compiled_s" in row:
            print(f"{row['kernel']:<22} {row['numpy_s']:>11.4f} {row['compiled_s']:>13.4f} "
                  f"{row['speedup']:>8.1f}x {row['max_rel_diff']:>10.1e}")
        else:
            print(f"{row['kernel']:<22} {row['numpy_s']:>11.4f} {'n/a':>13}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
