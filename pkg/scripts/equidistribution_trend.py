#!/usr/bin/env python3
"""Exact discrepancy of A n^alpha mod 1 against N, next to Erdos-Turan bounds."""

import argparse
from fractions import Fraction

from pslinear.disc import erdos_turan_bound, exact_discrepancy, power_sequence_fracs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", default="1.5")
    ap.add_argument("--coef", type=Fraction, default=Fraction(7, 10))
    ap.add_argument("--n", type=int, nargs="+", default=[100, 300, 1000, 3000, 10000])
    ap.add_argument("--m", type=int, default=100)
    args = ap.parse_args()

    fracs = power_sequence_fracs(args.coef, args.alpha, max(args.n))
    print(f"{'N':>7} {'D_N':>10} {'N*D_N':>9} {'ET(m=' + str(args.m) + ')':>10}")
    for n in args.n:
        d = exact_discrepancy(fracs[:n])
        et = erdos_turan_bound(fracs[:n], args.m)
        print(f"{n:>7} {float(d.mid):>10.5f} {n * float(d.mid):>9.2f} {et:>10.5f}")


if __name__ == "__main__":
    main()
