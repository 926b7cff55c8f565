#!/usr/bin/env python3
"""L1 distance between Hopf-Lax and Godunov on Burgers shock data under
mesh refinement, plus the Kruzkov residual of each Godunov run."""
import argparse
import csv
from pathlib import Path

import numpy as np

from entropylab import convexfn as cf
from entropylab.meter import kruzkov_residual
from entropylab.solvers import (InitialData, godunov_solve, hopf_lax_solve, l1_distance,
                                uniform_edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dx", type=float, nargs="+", default=[0.02, 0.01, 0.005, 0.0025])
    ap.add_argument("--left", type=float, default=1.0)
    ap.add_argument("--right", type=float, default=0.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--out", type=Path, default=Path("out/convergence"))
    args = ap.parse_args()

    f = cf.burgers()
    window = (-2.0, 2.0)
    u0 = InitialData.riemann(args.left, args.right, window)
    ks = np.linspace(min(args.left, args.right) - 0.5, max(args.left, args.right) + 0.5, 21)
    rows, prev = [], None
    for dx in args.dx:
        hl = hopf_lax_solve(f, u0.potential(), [args.t], uniform_edges(window, dx))
        gd = godunov_solve(f, u0, args.t, dx)
        err = l1_distance(hl, gd, args.t)
        res = kruzkov_residual(f, gd, ks)
        ratio = prev / err if prev else float("nan")
        rows.append({"dx": dx, "l1": err, "ratio": ratio, "kruzkov": res})
        print(f"dx={dx:<8g} L1={err:.4e} ratio={ratio:5.2f} kruzkov={res:.2e}")
        prev = err
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "convergence.csv", "w", newline="\n") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
