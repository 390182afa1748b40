#!/usr/bin/env python3
"""Time the fixed-tree sampler on large permutations.

Usage:
    python scripts/sampler_scaling.py [--sizes 10000 50000 100000 200000] [--repeats 3]
"""
import argparse
import time

from phylofix.sampler import RandomSource, canonical_permutation, sample_fixed_tree


def cycle_type(n):
    parts = []
    p = min(1 << 16, 1 << (n.bit_length() - 1))
    while p >= 1 and sum(parts) + p <= n:
        parts.append(p)
        p //= 2
    return tuple(parts) + (1,) * (n - sum(parts))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10_000, 50_000, 100_000, 200_000])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = RandomSource(args.seed)
    base = None
    print(f"{'n':>8} {'cycles':>7} {'best s':>8} {'us/leaf':>8} {'ratio':>6}")
    for n in args.sizes:
        sigma = canonical_permutation(cycle_type(n))
        best = float("inf")
        for _ in range(args.repeats):
            start = time.perf_counter()
            sample_fixed_tree(sigma, rng)
            best = min(best, time.perf_counter() - start)
        base = base or (n, best)
        ratio = (best / base[1]) / (n / base[0])
        print(f"{n:>8} {len(sigma.cycles):>7} {best:>8.3f} {1e6 * best / n:>8.2f} {ratio:>6.2f}")


if __name__ == "__main__":
    main()
