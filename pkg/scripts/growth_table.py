#!/usr/bin/env python3
"""Closed-form gamma for each growth case next to sampled evidence of the
three large-|u| conditions."""
import argparse
import json
from pathlib import Path

from entropylab.acceptance import growth_cases
from entropylab.entropypair import (EntropyPair, GrowthDescriptor, Unavailable,
                                    check_growth_conditions, gamma_closed_form)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("out/growth"))
    args = ap.parse_args()

    table = []
    print(f"{'case':<20} {'gamma':>8} {'(i)':>5} {'(ii)':>5} {'(iii)':>5} "
          f"{'C growth':>10} {'C max/min':>10}")
    for label, f, eta, _ in growth_cases():
        pair = EntropyPair(f, eta)
        g = gamma_closed_form(GrowthDescriptor.from_pair(pair))
        gam = 2.0 if isinstance(g, Unavailable) else g
        rep = check_growth_conditions(pair, gam)
        gtxt = "n/a" if isinstance(g, Unavailable) else f"{g:.4g}"
        print(f"{label:<20} {gtxt:>8} {str(rep.condition_i):>5} {str(rep.condition_ii):>5} "
              f"{str(rep.condition_iii):>5} {rep.c_growth:10.3g} {rep.c_max_over_min:10.3g}")
        table.append({"case": label, "gamma": gtxt, "gamma_used": gam, **rep.to_dict()})
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "growth.json").write_text(json.dumps(table, indent=2, default=str) + "\n")


if __name__ == "__main__":
    main()
