"""Exact counts of fixed trees and tangled chains.

All arithmetic is on ``int`` and ``fractions.Fraction``; nothing is ever
rounded.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from math import factorial, prod
from typing import Callable, Dict, Iterator, List, Tuple

from .core import Partition


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def is_binary_partition(parts: Partition) -> bool:
    return all(is_power_of_two(p) for p in parts)


def check_partition(parts) -> Partition:
    """Return ``parts`` as a non-increasing tuple of positive ints."""
    parts = tuple(int(p) for p in parts)
    if not parts or any(p < 1 for p in parts):
        raise ValueError(f"not a partition: {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"parts must be non-increasing: {parts}")
    return parts


def r_lambda(parts: Partition) -> int:
    """Number of trees fixed by any permutation of cycle type ``parts``.

    Zero unless every part is a power of two; otherwise the product over
    ``i >= 2`` of ``2 * (parts[i] + ... + parts[-1]) - 1``.
    """
    if not is_binary_partition(parts):
        return 0
    out = 1
    tail = 0
    for p in reversed(parts[1:]):
        tail += p
        out *= 2 * tail - 1
    return out


def z_lambda(parts: Partition) -> int:
    """Centralizer order: ``n! / z_lambda`` permutations have this cycle type."""
    return prod(size**mult * factorial(mult) for size, mult in Counter(parts).items())


def double_factorial(n: int) -> int:
    """``n!!`` with ``(-1)!! = 0!! = 1``."""
    return prod(range(n, 0, -2)) if n > 0 else 1


def num_trees(n: int) -> int:
    """``|B[n]| = (2n - 3)!!``."""
    return double_factorial(2 * n - 3)


def _partitions(n: int, largest: int, allowed) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for p in allowed:
        if p <= min(n, largest):
            for rest in _partitions(n - p, p, allowed):
                yield (p,) + rest


def enumerate_partitions(n: int) -> List[Partition]:
    """All partitions of ``n`` in lexicographically decreasing order."""
    return list(_partitions(n, n, range(n, 0, -1)))


def enumerate_binary_partitions(n: int) -> List[Partition]:
    """Binary partitions of ``n`` in lexicographically decreasing order."""
    if n < 1:
        raise ValueError("n must be positive")
    powers = [1 << i for i in range(n.bit_length() - 1, -1, -1)]
    return list(_partitions(n, n, powers))


def chain_weight(parts: Partition, k: int) -> Fraction:
    """``r_lambda**k / z_lambda``."""
    return Fraction(r_lambda(parts) ** k, z_lambda(parts))


def t_n_k(n: int, k: int) -> int:
    """Number of tangled chains of length ``k`` on ``n`` leaves."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    total = sum((chain_weight(lam, k) for lam in enumerate_binary_partitions(n)), Fraction(0))
    if total.denominator != 1:
        raise ArithmeticError(f"t({n},{k}) = {total} is not an integer")
    return total.numerator


# ----------------------------------------------------------------------
# S-table


def exact_single_part(m: int) -> Fraction:
    """Weight of the one-part partition ``(m)``: ``1**k / m``."""
    return Fraction(1, m)


@dataclass(frozen=True)
class STable:
    """``S[m, i, j]``: total chain weight of binary partitions of ``m`` whose
    largest part is ``2**i`` with multiplicity ``j``.

    ``lower[m, i]`` is the sum over pairs with largest part below ``2**i``.
    For fast exact draws, ``cumulative[m]`` holds the running total of the
    entries of ``pairs[m]`` multiplied by ``m!`` (always integers).
    """

    n_max: int
    k: int
    entries: Dict[Tuple[int, int, int], Fraction]
    lower: Dict[Tuple[int, int], Fraction]
    pairs: Dict[int, List[Tuple[int, int]]] = field(repr=False)
    cumulative: Dict[int, List[int]] = field(repr=False)

    def __getitem__(self, key: Tuple[int, int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def total(self, m: int) -> Fraction:
        return sum((self.entries[(m, i, j)] for i, j in self.pairs[m]), Fraction(0))

    def below(self, m: int, i: int) -> int:
        """Number of leading entries of ``pairs[m]`` with first index < ``i``."""
        return bisect_right(self.pairs[m], (i - 1, m))


def e_pairs(m: int) -> List[Tuple[int, int]]:
    """``(i, j)`` with ``j >= 1`` and ``j * 2**i <= m``, sorted."""
    return [(i, j) for i in range(m.bit_length()) for j in range(1, (m >> i) + 1)]


def build_s_table(
    n: int,
    k: int,
    single_part: Callable[[int], Fraction] = exact_single_part,
) -> STable:
    """Fill the table for every size ``m <= n`` by the largest-part recurrence.

    ``single_part(m)`` seeds ``S[m, log2 m, 1]``; the default is the true
    weight ``1/m`` of the one-part partition.  It is a parameter only so the
    effect of a different seed value can be demonstrated.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    entries: Dict[Tuple[int, int, int], Fraction] = {}
    lower: Dict[Tuple[int, int], Fraction] = {}
    pairs: Dict[int, List[Tuple[int, int]]] = {}
    cumulative: Dict[int, List[int]] = {}

    for m in range(1, n + 1):
        pairs[m] = e_pairs(m)
        for i, j in pairs[m]:
            p = 1 << i
            if p == m:
                value = Fraction(single_part(m))
            else:
                rest = m - p
                prev = entries[(rest, i, j - 1)] if j > 1 else lower[(rest, min(i, rest.bit_length()))]
                value = Fraction((2 * rest - 1) ** k, p * j) * prev if prev else Fraction(0)
            entries[(m, i, j)] = value

        acc = Fraction(0)
        for i in range(m.bit_length() + 1):
            lower[(m, i)] = acc
            acc += sum((entries[(m, i, j)] for j in range(1, (m >> i) + 1)), Fraction(0))

        fm = factorial(m)
        scaled = []
        for i, j in pairs[m]:
            a = entries[(m, i, j)] * fm
            if a.denominator != 1:
                raise ArithmeticError(f"S[{m},{i},{j}] * {m}! is not an integer")
            scaled.append(a.numerator)
        cumulative[m] = list(accumulate(scaled))

    return STable(n, k, entries, lower, pairs, cumulative)
