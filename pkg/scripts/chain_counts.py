#!/usr/bin/env python3
"""Print t(n, k), the number of tangled chains, from the partition sum and
from the S-table, and from orbit enumeration where that is feasible.

Usage:
    python scripts/chain_counts.py [--max-n 20] [--max-k 3]
"""
import argparse

from phylofix.counting import build_s_table, t_n_k
from phylofix.oracle import MAX_CHAIN_K, MAX_CHAIN_N, count_chains_bruteforce


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=20)
    parser.add_argument("--max-k", type=int, default=3)
    args = parser.parse_args()

    for k in range(1, args.max_k + 1):
        table = build_s_table(args.max_n, k)
        print(f"k = {k}")
        for n in range(1, args.max_n + 1):
            t = t_n_k(n, k)
            assert table.total(n) == t
            brute = ""
            if n <= MAX_CHAIN_N and k <= MAX_CHAIN_K:
                brute = f"  (orbits: {count_chains_bruteforce(n, k)})"
            print(f"  n = {n:>3}  {t}{brute}")


if __name__ == "__main__":
    main()
