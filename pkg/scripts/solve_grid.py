#!/usr/bin/env python3
"""Run the constructive search over a grid of exponents and equations.

Prints one line per case: pairs found, time, convergents used, and the
filter acceptance ratio.
"""

import argparse
import time

from pslinear.certreal import parse_alpha
from pslinear.errors import NoSolutionFound
from pslinear.solver import SearchParams, find_solutions


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", nargs="+", default=["1.2", "1.5", "1.8", "surd:1:1/2:2", "logquot:2:4:3"])
    ap.add_argument("--eq", nargs="+", default=["2,0", "3,1"], help="a,b pairs")
    ap.add_argument("--limit", type=int, default=3)
    ap.add_argument("--time-budget", type=float, default=60.0)
    args = ap.parse_args()

    for alpha in args.alpha:
        for spec in args.eq:
            a, b = spec.split(",")
            start = time.monotonic()
            stream = find_solutions(a, b, parse_alpha(alpha), SearchParams(limit=args.limit, time_budget=args.time_budget))
            try:
                pairs = list(stream)
            except NoSolutionFound:
                pairs = []
            rep = stream.report
            print(
                f"alpha={alpha:<14} y={a}x+{b:<3} pairs={len(pairs)} "
                f"t={time.monotonic() - start:6.2f}s convergents={rep.convergents_tried:<4} "
                f"accepted/filtered={rep.accepted}/{rep.candidates} "
                f"first={(pairs[0].x, pairs[0].y) if pairs else None}"
            )


if __name__ == "__main__":
    main()
