"""Uniform random generation of fixed trees, binary partitions and tangled chains.

The fixed-tree sampler grows a tree one cycle at a time.  A cycle ``c`` of
size ``2**k`` is attached to a tree fixed by the smaller permutation by
picking an edge ``e``, walking its orbit ``e, s(e), s(s(e)), ...`` (length
``2**i``), and hanging the unique ``c_r``-fixed tree from the midpoint of the
``r``-th orbit edge, where ``c_r`` is the cycle of ``c**(2**i)`` through the
``r``-th element of ``c``.  :func:`remove_largest_cycle` undoes this.
"""
from __future__ import annotations

import hashlib
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

from .core import (
    NotFixedError,
    Partition,
    Permutation,
    Tree,
    canonicalize,
    edge_leafsets,
    fold,
    is_fixed,
    leaves,
    preorder,
    to_newick,
)
from .counting import STable, chain_weight, enumerate_binary_partitions, is_binary_partition, is_power_of_two


class EmptySupportError(ValueError):
    """No tree is fixed by a permutation whose cycle type is not binary."""


class RandomSource:
    """Seeded generator with exact uniform draws on ``[0, m)`` for any ``m``."""

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._rng = random.Random(seed)

    def randbelow(self, m: int) -> int:
        # randrange rejects from a power-of-two envelope, so big m stays unbiased.
        return self._rng.randrange(m)

    def choice(self, seq: Sequence):
        return seq[self.randbelow(len(seq))]

    def spawn(self, index: int) -> "RandomSource":
        """Independent stream number ``index``, fixed by ``(seed, index)``."""
        digest = hashlib.blake2b(f"{self.seed}:{index}".encode(), digest_size=8).digest()
        return RandomSource(int.from_bytes(digest, "big"))


def choose_weighted(weights: Sequence[Fraction], rng: RandomSource) -> int:
    """Index drawn with probability proportional to the rational ``weights``."""
    weights = [Fraction(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    denom = lcm(*(w.denominator for w in weights))
    scaled = [w.numerator * (denom // w.denominator) for w in weights]
    total = sum(scaled)
    if total == 0:
        raise ValueError("all weights are zero")
    u = rng.randbelow(total)
    for idx, w in enumerate(scaled):
        if u < w:
            return idx
        u -= w
    raise AssertionError("unreachable")


# ----------------------------------------------------------------------
# Array-backed tree under construction


class _Builder:
    """Mutable tree with each vertex's image under the current permutation.

    Vertex ids double as edge ids (an edge is named by its bottom vertex).
    ``img[v]`` is the vertex that the permutation maps ``v`` to.
    """

    def __init__(self):
        self.left: List[int] = []
        self.right: List[int] = []
        self.parent: List[int] = []
        self.label: List[int] = []
        self.img: List[int] = []
        self.leaf_of: Dict[int, int] = {}
        self.root = -1

    def __len__(self) -> int:
        return len(self.parent)

    def _new(self, left: int, right: int, label: int) -> int:
        v = len(self.parent)
        self.left.append(left)
        self.right.append(right)
        self.parent.append(-1)
        self.label.append(label)
        self.img.append(-1)
        return v

    def _leaf(self, label: int) -> int:
        if label in self.leaf_of:
            raise ValueError(f"label {label} already in the tree")
        v = self._new(-1, -1, label)
        self.leaf_of[label] = v
        return v

    def _join(self, a: int, b: int) -> int:
        v = self._new(a, b, 0)
        self.parent[a] = v
        self.parent[b] = v
        return v

    def _cycle_tree(self, seq: Sequence[int]) -> int:
        # The two subtrees hold the two cycles of the square.
        if len(seq) == 1:
            return self._leaf(seq[0])
        return self._join(self._cycle_tree(seq[0::2]), self._cycle_tree(seq[1::2]))

    def _set_images(self, start: int, cycle: Sequence[int]) -> None:
        leaf_of = self.leaf_of
        size = len(cycle)
        for t, x in enumerate(cycle):
            self.img[leaf_of[x]] = leaf_of[cycle[(t + 1) % size]]
        img, parent, left = self.img, self.parent, self.left
        for v in range(start, len(parent)):
            if left[v] >= 0 and img[v] < 0:
                img[v] = parent[img[left[v]]]

    def start(self, cycle: Sequence[int]) -> None:
        self.root = self._cycle_tree(cycle)
        self._set_images(0, cycle)

    def orbit(self, v: int) -> List[int]:
        out = [v]
        x = self.img[v]
        while x != v:
            out.append(x)
            x = self.img[x]
        return out

    def _subdivide(self, v: int, hang: int) -> int:
        p = self.parent[v]
        u = self._join(v, hang)
        self.parent[u] = p
        if p < 0:
            self.root = u
        elif self.left[p] == v:
            self.left[p] = u
        else:
            self.right[p] = u
        return u

    def insert(self, v: int, cycle: Sequence[int]) -> None:
        """Attach ``cycle`` (listed in cycle order) at edge ``v``."""
        orbit = self.orbit(v)
        q = len(orbit)
        if len(cycle) % q:
            raise ValueError(f"edge orbit of size {q} does not divide cycle size {len(cycle)}")
        first = len(self)
        subtrees = [self._cycle_tree(cycle[r::q]) for r in range(q)]
        mids = [self._subdivide(orbit[r], subtrees[r]) for r in range(q)]
        for r, u in enumerate(mids):
            self.img[u] = mids[(r + 1) % q]
        self._set_images(first, cycle)

    @classmethod
    def from_tree(cls, tree: Tree, sigma: Permutation) -> "_Builder":
        """Load a canonical tree with ids in preorder, so ids are edge indices."""
        b = cls()
        stack: List[Tuple[Tree, int]] = [(tree, -1)]
        while stack:
            t, p = stack.pop()
            if isinstance(t, int):
                v = b._leaf(t)
            else:
                v = b._new(-1, -1, 0)
            b.parent[v] = p
            if p < 0:
                b.root = v
            elif b.left[p] < 0:
                b.left[p] = v
            else:
                b.right[p] = v
            if not isinstance(t, int):
                # Pushed right first so the left child gets the next id.
                stack.append((t[1], v))
                stack.append((t[0], v))
        # Children have larger preorder ids than their parent.
        for v in range(len(b) - 1, -1, -1):
            if b.left[v] < 0:
                b.img[v] = b.leaf_of[sigma(b.label[v])]
            else:
                a, c = b.img[b.left[v]], b.img[b.right[v]]
                if b.parent[a] != b.parent[c] or a == c:
                    raise NotFixedError("tree is not fixed by the permutation")
                b.img[v] = b.parent[a]
        return b

    def to_tree(self) -> Tree:
        """Canonical nested-tuple form, built without recursion."""
        left, right, label = self.left, self.right, self.label
        built: Dict[int, Tuple[Tree, int]] = {}
        stack = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if left[v] < 0:
                built[v] = (label[v], label[v])
            elif expanded:
                a = built.pop(left[v])
                b = built.pop(right[v])
                built[v] = ((a[0], b[0]), a[1]) if a[1] < b[1] else ((b[0], a[0]), b[1])
            else:
                stack.append((v, True))
                stack.append((right[v], False))
                stack.append((left[v], False))
        return built[self.root][0]


# ----------------------------------------------------------------------
# The bijection


def _check_cycle(cycle: Sequence[int]) -> Tuple[int, ...]:
    cycle = tuple(cycle)
    if not cycle or not is_power_of_two(len(cycle)):
        raise ValueError(f"cycle length {len(cycle)} is not a power of two")
    if len(set(cycle)) != len(cycle):
        raise ValueError("cycle repeats a label")
    lo = cycle.index(min(cycle))
    return cycle[lo:] + cycle[:lo]


def unique_single_cycle_tree(c: Permutation) -> Tree:
    """The only tree fixed by a single cycle of length ``2**k``."""
    if len(c.cycles) != 1:
        raise ValueError("permutation is not a single cycle")
    cycle = _check_cycle(c.cycles[0])

    def build(seq):
        if len(seq) == 1:
            return seq[0]
        return (build(seq[0::2]), build(seq[1::2]))

    return canonicalize(build(cycle))


def insert_cycle(tree: Tree, e: int, cycle: Sequence[int], sigma_prime: Permutation) -> Tree:
    """Attach ``cycle`` to ``tree`` at edge index ``e``.

    ``tree`` must be fixed by ``sigma_prime`` and ``cycle`` is given in cycle
    order.  The result is fixed by ``sigma_prime`` extended by ``cycle``.
    """
    cycle = _check_cycle(cycle)
    tree = canonicalize(tree)
    if set(cycle) & sigma_prime.domain:
        raise ValueError("cycle labels collide with the tree's labels")
    if any(len(c) > len(cycle) for c in sigma_prime.cycles):
        raise ValueError("inserted cycle must be at least as long as every other cycle")
    b = _Builder.from_tree(tree, sigma_prime)
    if not 0 <= e < len(b):
        raise IndexError(f"edge {e} out of range for a tree with {len(b)} edges")
    b.insert(e, cycle)
    return b.to_tree()


def remove_largest_cycle(tree: Tree, sigma: Permutation) -> Tuple[Tree, int]:
    """Inverse of :func:`insert_cycle` for the largest cycle of ``sigma``.

    Every maximal subtree whose leaves all lie in the cycle is cut off along
    with its parent vertex.  The returned edge is the one whose midpoint was
    the parent of the cut subtree holding the cycle's smallest label.
    """
    if len(sigma.cycles) < 2:
        raise ValueError("permutation must have at least two cycles")
    if set(leaves(tree)) != sigma.domain:
        raise ValueError("tree labels differ from the permutation's domain")
    if not is_fixed(tree, sigma):
        raise NotFixedError("tree is not fixed by the permutation")
    cycle = sigma.largest_cycle()
    members = set(cycle)
    smallest = cycle[0]
    marked: List[frozenset] = []

    # Each fold value is (reduced subtree or None when fully cut, holds smallest).
    def leaf(x):
        if x in members:
            return None, x == smallest
        return x, False

    def node(a, b):
        if a[0] is None and b[0] is None:
            return None, a[1] or b[1]
        if a[0] is None or b[0] is None:
            cut, kept = (a, b) if a[0] is None else (b, a)
            if cut[1]:
                marked.append(frozenset(leaves(kept[0])))
            return kept[0], False
        return (a[0], b[0]), False

    reduced = canonicalize(fold(tree, leaf, node)[0])
    return reduced, edge_leafsets(reduced).index(marked[0])


# ----------------------------------------------------------------------
# Samplers


def sample_fixed_tree(sigma: Permutation, rng: RandomSource) -> Tree:
    """Uniform tree among those fixed by ``sigma``, in time linear in ``len(sigma)``."""
    if not is_binary_partition(sigma.cycle_type):
        raise EmptySupportError(f"cycle type {sigma.cycle_type} is not binary; no tree is fixed")
    cycles = sorted(sigma.cycles, key=lambda c: (len(c), c[0]))
    b = _Builder()
    b.start(cycles[0])
    for cycle in cycles[1:]:
        b.insert(rng.randbelow(len(b)), cycle)
    return b.to_tree()


def sample_partition(n: int, k: int, table: STable, rng: RandomSource) -> Partition:
    """Binary partition of ``n`` with probability ``r**k / z / t(n, k)``.

    Draws the largest part and its multiplicity, then recurses on what is
    left with strictly smaller parts.
    """
    if table.k != k or not 1 <= n <= table.n_max:
        raise ValueError(f"table built for n <= {table.n_max}, k = {table.k}")
    parts: List[int] = []
    m = n
    bound = None
    while m:
        cum = table.cumulative[m]
        hi = len(cum) if bound is None else table.below(m, bound)
        idx = bisect_right(cum, rng.randbelow(cum[hi - 1]), 0, hi)
        i, j = table.pairs[m][idx]
        parts.extend([1 << i] * j)
        m -= j << i
        bound = i
    return tuple(parts)


def partition_distribution(n: int, table: STable) -> Dict[Partition, Fraction]:
    """Exact law of :func:`sample_partition`, by walking every branch."""
    out: Dict[Partition, Fraction] = {}

    def walk(m, bound, prefix, prob):
        if m == 0:
            out[prefix] = out.get(prefix, Fraction(0)) + prob
            return
        cum = table.cumulative[m]
        hi = len(cum) if bound is None else table.below(m, bound)
        total = cum[hi - 1]
        prev = 0
        for idx in range(hi):
            w = cum[idx] - prev
            prev = cum[idx]
            if w:
                i, j = table.pairs[m][idx]
                walk(m - (j << i), i, prefix + (1 << i,) * j, prob * Fraction(w, total))

    walk(n, None, (), Fraction(1))
    return out


def sample_partition_direct(n: int, k: int, rng: RandomSource) -> Partition:
    """Same law as :func:`sample_partition` from a full table of partitions."""
    parts = enumerate_binary_partitions(n)
    return parts[choose_weighted([chain_weight(lam, k) for lam in parts], rng)]


def canonical_permutation(parts: Partition) -> Permutation:
    """Cycles on consecutive blocks: ``(1..p1)(p1+1..p1+p2)...``."""
    cycles = []
    start = 1
    for p in parts:
        cycles.append(range(start, start + p))
        start += p
    return Permutation.from_cycles(cycles)


@dataclass(frozen=True)
class TangledChain:
    """``k`` canonical trees on ``{1..n}``, read up to simultaneous relabelling."""

    trees: Tuple[Tree, ...]

    @property
    def k(self) -> int:
        return len(self.trees)

    @property
    def n(self) -> int:
        return len(leaves(self.trees[0]))

    def to_newick(self) -> List[str]:
        return [to_newick(t) for t in self.trees]


def sample_tangled_chain(n: int, k: int, table: STable, rng: RandomSource) -> TangledChain:
    """Uniform tangled chain of length ``k`` and size ``n``."""
    sigma = canonical_permutation(sample_partition(n, k, table, rng))
    return TangledChain(tuple(sample_fixed_tree(sigma, rng) for _ in range(k)))
