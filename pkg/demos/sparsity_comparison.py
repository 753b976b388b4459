"""Active set growth: plain away-step FW vs its pivot-controlled twin.

Runs both on the same interior-optimum quadratic over the probability
simplex and prints a small table of active set sizes along the way. The
pivot-controlled run is capped at n + 1 = 51 by construction; the plain
run is free to accumulate vertices.

Usage: python3 demos/sparsity_comparison.py [--n 50] [--iters 2000]
"""

import argparse

import numpy as np

from pivotfw import Quadratic, Simplex, StepRule, run_pm
from pivotfw.fw_core import run_plain
from pivotfw.harness import write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--iters", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--csv-prefix", default=None,
                    help="also write <prefix>_{afw,p_afw}.csv trajectories")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    region = Simplex(args.n)
    objective = Quadratic(rng.dirichlet(np.ones(args.n)))

    plain = run_plain("afw", region, objective, StepRule("line-search"),
                      args.iters)
    pm = run_pm("afw", region, objective, StepRule("line-search"), args.iters)

    print(f"quadratic over the simplex, n={args.n}, {args.iters} iterations")
    print(f"{'iter':>6} {'afw |S|':>8} {'p-afw |S|':>10} {'p-afw gap':>12}")
    marks = sorted({0, 1, 10, 50, 200, len(pm.records) - 1} & set(range(len(pm.records))))
    for t in marks:
        print(f"{pm.records[t].iter:>6} {plain.records[t].active_set_size:>8} "
              f"{pm.records[t].active_set_size:>10} {pm.records[t].fw_gap:>12.3e}")
    print(f"max active set: afw={max(r.active_set_size for r in plain.records)} "
          f"p-afw={max(r.active_set_size for r in pm.records)} "
          f"(cap n+1={args.n + 1})")

    if args.csv_prefix:
        write_csv(args.csv_prefix + "_afw.csv", plain.records)
        write_csv(args.csv_prefix + "_p_afw.csv", pm.records)
        print(f"wrote {args.csv_prefix}_afw.csv and {args.csv_prefix}_p_afw.csv")


if __name__ == "__main__":
    main()
