#!/usr/bin/env python3
"""List gamma-witnesses p/q of a^(1/alpha) and match brute-force solutions to them."""

import argparse
from fractions import Fraction

from pslinear.certreal import parse_alpha
from pslinear.dioph import WitnessQuery, gamma_witnesses, solution_to_witness
from pslinear.solver import brute_force_solutions, normalize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", default="surd:1:1:2")
    ap.add_argument("--a", type=Fraction, default=Fraction(2))
    ap.add_argument("--gamma", type=Fraction, default=Fraction(12, 5))
    ap.add_argument("--q-max", type=int, default=10**6)
    ap.add_argument("--x-max", type=int, default=10**6)
    args = ap.parse_args()

    alpha = parse_alpha(args.alpha)
    ws = gamma_witnesses(WitnessQuery(args.a, alpha, args.gamma, args.q_max))
    print(f"witnesses (q <= {args.q_max}): {ws}")
    eq = normalize(args.a, 0)
    for pair in brute_force_solutions(args.a, 0, alpha, args.x_max):
        w = solution_to_witness(pair, eq, alpha, args.gamma)
        print(f"pair ({pair.x}, {pair.y}) -> p/q = {w.p}/{w.q}, witness: {w.holds}")


if __name__ == "__main__":
    main()
