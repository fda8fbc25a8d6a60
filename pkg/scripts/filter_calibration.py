#!/usr/bin/env python3
"""Empirical share of the window landing in the target interval, per convergent.

The share should approach diam(I) as q grows; the printed gap is the
observed |share - diam(I)|.
"""

import argparse
from fractions import Fraction

from pslinear.certreal import parse_alpha
from pslinear.dioph import iter_convergents
from pslinear.solver import (
    SearchParams,
    base_solution,
    filter_fraction,
    normalize,
    resolve_params,
    target_interval,
    window_bounds,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", default="1.5")
    ap.add_argument("--a", default="2")
    ap.add_argument("--b", default="0")
    ap.add_argument("--max-window", type=int, default=200_000)
    args = ap.parse_args()

    alpha = parse_alpha(args.alpha)
    eq = normalize(args.a, args.b)
    res = resolve_params(eq, alpha, SearchParams())
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    for conv in iter_convergents(Fraction(eq.d, eq.c), alpha):
        if conv.p <= 0 or conv.p == conv.q:
            continue
        lo, hi = window_bounds(conv.q, res.window_exponent, res.window_multiplier)
        if hi - lo > args.max_window:
            break
        share, diam = filter_fraction(eq, alpha, conv, iv, res)
        print(f"q={conv.q:<22} window={hi - lo + 1:<8} share={share:.4f} diam={diam:.4f} gap={abs(share - diam):.4f}")


if __name__ == "__main__":
    main()
