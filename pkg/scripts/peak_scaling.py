#!/usr/bin/env python3
"""Measure how the distribution peaks drift toward k/n = (1 -+ a)/2 and how
the finite-n transition value approaches its limit as n grows.

Usage:
    python scripts/peak_scaling.py [--z Z] [--a NUM/DEN]
"""

import argparse
from fractions import Fraction

from pqlambert import AsymmetryParam, omega, omega_finite_n, peak_drift


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="1/2", help="asymmetry as an exact rational")
    ap.add_argument("--z", type=float, default=-5.0)
    ap.add_argument("--max-exp", type=int, default=16,
                    help="largest n is 2**max_exp (peaks measured to 2**14)")
    args = ap.parse_args()

    frac = Fraction(args.a)
    a = AsymmetryParam.from_rational(frac.numerator, frac.denominator)
    w_inf = omega(a, args.z)
    print(f"a = {args.a}, z = {args.z}, omega = {w_inf:.12f}")
    print(f"{'n':>10s} {'omega_bar':>18s} {'|err|':>12s} {'k_peak':>8s} {'offset':>12s}")
    for k in range(8, args.max_exp + 1, 2):
        n = 2 ** k
        wbar = omega_finite_n(n, a, args.z)
        if k <= 14:
            k_peak, offset = peak_drift(n, a, args.z)
            print(f"{n:>10d} {wbar:>18.12f} {abs(wbar - w_inf):>12.3e} "
                  f"{k_peak:>8d} {offset:>12.6f}")
        else:
            print(f"{n:>10d} {wbar:>18.12f} {abs(wbar - w_inf):>12.3e} "
                  f"{'-':>8s} {'-':>12s}")


if __name__ == "__main__":
    main()
