#!/usr/bin/env python3
"""Random convex fluxes and Riemann data: which candidate fan passes the
vanishing-measure test, and how close is it to the Hopf-Lax solution?"""
import argparse
import json
from pathlib import Path

import numpy as np

from entropylab.acceptance import selection_trial


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--dx", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=Path("out/selection"))
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = [selection_trial(rng, dx=args.dx) for _ in range(args.trials)]
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "trials.json").write_text(json.dumps(rows, indent=2) + "\n")

    print(f"{'#':>3} {'u_l':>7} {'u_r':>7} {'selected':>9} {'L1':>10} {'bound':>7} {'jump':>20}")
    for i, r in enumerate(rows):
        ul, ur = r["states"]
        sel = ",".join(r["passing"]) or "-"
        print(f"{i:3d} {ul:7.3f} {ur:7.3f} {sel:>9} {r.get('l1', float('nan')):10.2e} "
              f"{r.get('l1_bound', float('nan')):7.3f} {r.get('uc_on_shock', 'n/a'):>20}")


if __name__ == "__main__":
    main()
