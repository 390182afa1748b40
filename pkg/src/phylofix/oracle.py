"""Brute-force ground truth for small label sets.

Nothing here uses the product formula or the bijection; counts come from
listing every tree and testing it directly.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Dict, Hashable, Iterable, Iterator, List, Sequence, Tuple

from .core import Permutation, Tree, to_newick

MAX_TREE_LABELS = 9
MAX_CHAIN_N = 5
MAX_CHAIN_K = 3


class GuardError(ValueError):
    """Requested size exceeds an oracle guard."""


def _graftings(tree: Tree, x: int) -> Iterator[Tree]:
    # Hanging a label larger than every existing one keeps the form canonical.
    yield (tree, x)
    if not isinstance(tree, int):
        a, b = tree
        for a2 in _graftings(a, x):
            yield (a2, b)
        for b2 in _graftings(b, x):
            yield (a, b2)


def enumerate_all_trees(labels: Iterable[int]) -> List[Tree]:
    """Every tree on ``labels``, grown by inserting labels in increasing order
    on every edge of every smaller tree."""
    labels = sorted(set(labels))
    if not 1 <= len(labels) <= MAX_TREE_LABELS:
        raise GuardError(f"tree enumeration needs 1 <= |labels| <= {MAX_TREE_LABELS}, got {len(labels)}")
    trees: List[Tree] = [labels[0]]
    for x in labels[1:]:
        trees = [t2 for t in trees for t2 in _graftings(t, x)]
    return trees


def _relabel(tree: Tree, img: Dict[int, int]) -> Tuple[Tree, int]:
    # Recursive on purpose: oracle trees have at most MAX_TREE_LABELS leaves.
    if isinstance(tree, int):
        y = img[tree]
        return y, y
    a = _relabel(tree[0], img)
    b = _relabel(tree[1], img)
    if a[1] < b[1]:
        return (a[0], b[0]), a[1]
    return (b[0], a[0]), b[1]


def relabel(tree: Tree, img: Dict[int, int]) -> Tree:
    return _relabel(tree, img)[0]


def enumerate_fixed_trees(sigma: Permutation) -> List[Tree]:
    img = sigma.mapping
    return [t for t in enumerate_all_trees(sigma.domain) if _relabel(t, img)[0] == t]


def count_fixed_trees(sigma: Permutation) -> int:
    return len(enumerate_fixed_trees(sigma))


def _all_relabellings(n: int) -> List[Dict[int, int]]:
    return [dict(zip(range(1, n + 1), p)) for p in permutations(range(1, n + 1))]


def chain_orbits(n: int, k: int) -> Tuple[List[Tree], Dict[Tuple[int, ...], int]]:
    """Split ``B[n]**k`` into relabelling orbits.

    Returns the tree list and a map from each index tuple into that list to
    its orbit id.  Orbit ids are assigned in order of first appearance.
    """
    if not (1 <= n <= MAX_CHAIN_N and 1 <= k <= MAX_CHAIN_K):
        raise GuardError(f"chain orbits need n <= {MAX_CHAIN_N} and k <= {MAX_CHAIN_K}")
    trees = enumerate_all_trees(range(1, n + 1))
    index = {t: idx for idx, t in enumerate(trees)}
    # act[p][t]: index of the image of tree t under relabelling p
    act = [[index[relabel(t, img)] for t in trees] for img in _all_relabellings(n)]
    orbit_of: Dict[Tuple[int, ...], int] = {}
    count = 0
    for tup in product(range(len(trees)), repeat=k):
        if tup in orbit_of:
            continue
        for row in act:
            orbit_of[tuple(row[t] for t in tup)] = count
        count += 1
    return trees, orbit_of


def count_chains_bruteforce(n: int, k: int) -> int:
    _, orbit_of = chain_orbits(n, k)
    return max(orbit_of.values()) + 1


def chain_orbit_key(trees: Sequence[Tree]) -> Tuple[str, ...]:
    """Lexicographically least tuple of Newick strings over all relabellings."""
    n = len(_leaf_labels(trees[0]))
    if n > MAX_CHAIN_N + 2:
        raise GuardError(f"orbit keys need n <= {MAX_CHAIN_N + 2}")
    return min(tuple(to_newick(relabel(t, img)) for t in trees) for img in _all_relabellings(n))


def _leaf_labels(tree: Tree) -> List[int]:
    if isinstance(tree, int):
        return [tree]
    return _leaf_labels(tree[0]) + _leaf_labels(tree[1])


# ----------------------------------------------------------------------
# Distributions


@dataclass(frozen=True)
class Distribution:
    """Weights over hashable outcomes; exact or empirical counts."""

    weights: Dict[Hashable, Fraction]

    @classmethod
    def from_counts(cls, counts: Iterable[Hashable] | Counter) -> "Distribution":
        counts = counts if isinstance(counts, Counter) else Counter(counts)
        return cls({x: Fraction(c) for x, c in counts.items()})

    @classmethod
    def uniform(cls, support: Iterable[Hashable]) -> "Distribution":
        return cls({x: Fraction(1) for x in support})

    @property
    def support(self) -> List[Hashable]:
        return [x for x, w in self.weights.items() if w]

    def normalized(self) -> Dict[Hashable, Fraction]:
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("negative weight")
        total = sum(self.weights.values(), Fraction(0))
        if total == 0:
            raise ValueError("empty distribution")
        return {x: w / total for x, w in self.weights.items()}


def tv_distance(empirical: Distribution, exact: Distribution) -> Fraction:
    """Half the L1 distance between the two normalized weight vectors."""
    p = empirical.normalized()
    q = exact.normalized()
    keys = set(p) | set(q)
    return sum((abs(p.get(x, 0) - q.get(x, 0)) for x in keys), Fraction(0)) / 2
