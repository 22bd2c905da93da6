#!/usr/bin/env python3
"""Logical error rate sweep for one experiment, with a log-log slope fit.

    python3 scripts/mc_sweep.py --code bt-27 --experiment memory --p 1e-3 2e-3 --shots 1000000
"""

import argparse
import csv
import sys

import numpy as np

from dimjump.registry import build_code, registry_load
from dimjump.sim import NoiseModel, monte_carlo, teleport_pair


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--code", default="bt-27")
    ap.add_argument("--experiment", choices=["memory", "teleport", "single_shot"], default="memory")
    ap.add_argument("--noise", choices=["code_capacity", "phenomenological", "circuit_level"], default="code_capacity")
    ap.add_argument("--direction", choices=["to3D", "to2D"], default="to3D")
    ap.add_argument("--p", type=float, nargs="+", default=[1e-3, 2e-3])
    ap.add_argument("--shots", type=int, default=100_000)
    ap.add_argument("--rounds", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="write results here instead of stdout")
    args = ap.parse_args()

    spec = registry_load(args.code)
    if args.experiment == "teleport":
        target = teleport_pair(spec)
        pauli = "Z" if args.direction == "to3D" else "X"
    else:
        target = build_code(spec, 3)
        pauli = "X" if args.experiment == "single_shot" else "Z"

    results = []
    for p in args.p:
        r = monte_carlo(args.experiment, target, NoiseModel(args.noise, p, data_pauli=pauli), args.shots, args.seed, rounds=args.rounds, direction=args.direction)
        results.append(r)
        print(f"p={p:g} failures={r.failures}/{r.shots} P={r.P:.3e} p_L={r.p_L:.3e} CI=[{r.ci_low:.2e},{r.ci_high:.2e}]", file=sys.stderr)

    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.writer(out)
    w.writerow(["p", "shots", "failures", "P", "p_L", "ci_low", "ci_high"])
    for r in results:
        w.writerow([r.p, r.shots, r.failures, r.P, r.p_L, r.ci_low, r.ci_high])
    if out is not sys.stdout:
        out.close()

    usable = [r for r in results if r.failures > 0]
    if len(usable) >= 2:
        x = np.log([r.p for r in usable])
        y = np.log([r.p_L for r in usable])
        slope = np.polyfit(x, y, 1)[0] if len(usable) > 2 else (y[1] - y[0]) / (x[1] - x[0])
        print(f"log-log slope {slope:.2f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
