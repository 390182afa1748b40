#!/usr/bin/env python3
"""Compare S-table totals under two seeds for the one-part entry.

The one-part partition (m) has weight r**k / z = 1/m.  Seeding the table
with 1/(m-1)! instead changes the totals; the printed table shows the sizes
where  sum_E S[m,i,j] = t(m, k)  stops holding.

Usage:
    python scripts/single_part_seed.py [--max-m 8] [--k 2]
"""
import argparse
from fractions import Fraction
from math import factorial

from phylofix.counting import build_s_table, t_n_k


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-m", type=int, default=8)
    parser.add_argument("--k", type=int, default=2)
    args = parser.parse_args()

    exact = build_s_table(args.max_m, args.k)
    other = build_s_table(args.max_m, args.k, single_part=lambda m: Fraction(1, factorial(m - 1)))
    print(f"{'m':>3} {'t(m,k)':>10} {'seed 1/m':>10} {'seed 1/(m-1)!':>16}")
    for m in range(1, args.max_m + 1):
        print(f"{m:>3} {t_n_k(m, args.k):>10} {str(exact.total(m)):>10} {str(other.total(m)):>16}")


if __name__ == "__main__":
    main()
