"""Self-checks behind ``phylofix verify``.

Each check yields a description of every failing instance; an empty result
means the check passed.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Dict, Iterator, List, Tuple

from .core import Partition, Permutation, apply_permutation, is_fixed
from .counting import (
    build_s_table,
    enumerate_binary_partitions,
    enumerate_partitions,
    num_trees,
    r_lambda,
    t_n_k,
)
from .oracle import (
    MAX_CHAIN_K,
    MAX_CHAIN_N,
    count_chains_bruteforce,
    enumerate_all_trees,
    enumerate_fixed_trees,
)
from .sampler import canonical_permutation, insert_cycle, remove_largest_cycle

MAX_VERIFY_N = 8
MAX_BIJECTION_N = 7
S_TABLE_N = 30


def check_tree_counts(max_n: int) -> Iterator[str]:
    for n in range(1, max_n + 1):
        got = len(enumerate_all_trees(range(1, n + 1)))
        if got != num_trees(n):
            yield f"|B[{n}]| = {got}, expected {num_trees(n)}"


def check_fixed_counts(max_n: int) -> Iterator[str]:
    for n in range(1, max_n + 1):
        for lam in enumerate_partitions(n):
            got = len(enumerate_fixed_trees(canonical_permutation(lam)))
            if got != r_lambda(lam):
                yield f"lambda={lam}: brute force {got}, formula {r_lambda(lam)}"


def check_chain_counts(max_n: int) -> Iterator[str]:
    for n in range(1, min(max_n, MAX_CHAIN_N) + 1):
        for k in range(1, MAX_CHAIN_K + 1):
            got = count_chains_bruteforce(n, k)
            if got != t_n_k(n, k):
                yield f"n={n} k={k}: orbits {got}, formula {t_n_k(n, k)}"


def check_s_table(max_m: int = S_TABLE_N) -> Iterator[str]:
    for k in range(1, 4):
        table = build_s_table(max_m, k)
        for m in range(1, max_m + 1):
            if table.total(m) != t_n_k(m, k):
                yield f"k={k} m={m}: table sum {table.total(m)} != {t_n_k(m, k)}"


def _conjugator(model: Permutation, sigma: Permutation) -> Dict[int, int]:
    """A relabelling ``p`` with ``p * model * p**-1 == sigma``."""
    by_len: Dict[int, List[Tuple[int, ...]]] = {}
    for c in sigma.cycles:
        by_len.setdefault(len(c), []).append(c)
    img = {}
    for c in model.cycles:
        target = by_len[len(c)].pop()
        img.update(zip(c, target))
    return img


def binary_permutations(n: int) -> Iterator[Permutation]:
    """Every permutation of ``{1..n}`` with binary cycle type and >= 2 cycles."""
    labels = range(1, n + 1)
    for images in permutations(labels):
        sigma = Permutation(dict(zip(labels, images)))
        lam = sigma.cycle_type
        if len(lam) >= 2 and r_lambda(lam):
            yield sigma


def check_bijection(max_n: int) -> Iterator[str]:
    """Round trip and image count for every binary permutation up to ``max_n``."""
    fixed_by_type: Dict[Partition, list] = {}
    for n in range(2, min(max_n, MAX_BIJECTION_N) + 1):
        for sigma in binary_permutations(n):
            yield from _bijection_failures(sigma, fixed_by_type)


def _bijection_failures(sigma: Permutation, cache: Dict[Partition, list]) -> Iterator[str]:
    lam = sigma.cycle_type
    model = canonical_permutation(lam)
    if lam not in cache:
        cache[lam] = enumerate_fixed_trees(model)
    relabel = Permutation(_conjugator(model, sigma))
    fixed = [apply_permutation(relabel, t) for t in cache[lam]]

    cycle = sigma.largest_cycle()
    rest = sigma.restrict(sigma.domain - set(cycle))
    lam_rest = rest.cycle_type
    if lam_rest not in cache:
        cache[lam_rest] = enumerate_fixed_trees(canonical_permutation(lam_rest))
    n_rest = len(rest)

    images = set()
    for tree in fixed:
        reduced, e = remove_largest_cycle(tree, sigma)
        if not is_fixed(reduced, rest):
            yield f"sigma={sigma}: reduced tree not fixed by {rest}"
        if insert_cycle(reduced, e, cycle, rest) != tree:
            yield f"sigma={sigma}: round trip fails at {tree}"
        images.add((reduced, e))
    expected = (2 * n_rest - 1) * len(cache[lam_rest])
    if not len(images) == len(fixed) == expected:
        yield f"sigma={sigma}: |B| = {len(fixed)}, images {len(images)}, expected {expected}"


def check_erratum() -> Iterator[str]:
    """The seed ``1/(m-1)!`` for one-part partitions must break the m=4, k=2 sum."""
    table = build_s_table(4, 2, single_part=lambda m: Fraction(1, factorial(m - 1)))
    if table.total(4) == t_n_k(4, 2):
        yield "factorial seed unexpectedly reproduces t(4,2)"


def checks(max_n: int) -> List[Tuple[str, Callable[[], Iterator[str]]]]:
    if not 1 <= max_n <= MAX_VERIFY_N:
        raise ValueError(f"--max-n must be between 1 and {MAX_VERIFY_N} (oracle guard), got {max_n}")
    return [
        ("tree counts (2n-3)!!", lambda: check_tree_counts(max_n)),
        ("fixed-tree counts vs brute force", lambda: check_fixed_counts(max_n)),
        ("chain counts vs orbit enumeration", lambda: check_chain_counts(max_n)),
        (f"S-table sums, m <= {S_TABLE_N}", lambda: check_s_table()),
        ("one-part seed 1/(m-1)! rejected", check_erratum),
        ("bijection round trip", lambda: check_bijection(max_n)),
    ]
