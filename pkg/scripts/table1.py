#!/usr/bin/env python3
"""Print the parameter table for every registry pair and optionally dump JSON."""

import argparse
import json
import sys

from dimjump.report import table1


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--isd", type=int, default=40)
    ap.add_argument("--ccz-budget", type=int, default=0, help="run the CCZ search with this node budget")
    ap.add_argument("--json", help="write rows to this file")
    args = ap.parse_args()
    rows = table1(isd_iterations=args.isd, ccz_budget=args.ccz_budget)
    for r in rows:
        print(f"{r.line()}  ({r.seconds:.1f}s)")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_dict() for r in rows], fh, indent=1)
    return 0 if all(r.nk_ok and r.distance_ok() is not False for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
