"""Trees, permutations and their text formats.

A tree is a nested value: a leaf is a positive ``int`` label, an internal
node is a 2-tuple of subtrees.  Children are unordered, so every public
function returns trees in canonical form, where the child holding the smaller
minimum label comes first.  Two trees are equal as non-embedded trees iff
their canonical forms are ``==``.

Edges are identified with their bottom vertex.  ``edges(tree)`` lists the
``2n - 1`` bottom vertices in canonical preorder (the root-edge first), and an
edge reference is an index into that list.

Large trees can be thousands of levels deep, so every traversal here is
iterative.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, Iterator, List, Tuple, TypeVar, Union

Tree = Union[int, Tuple["Tree", "Tree"]]
Partition = Tuple[int, ...]

T = TypeVar("T")

_DIGITS = frozenset("0123456789")


class NewickError(ValueError):
    pass


class CycleNotationError(ValueError):
    pass


class NotFixedError(ValueError):
    """The tree is not fixed by the permutation."""


# ----------------------------------------------------------------------
# Traversals


def fold(tree: Tree, leaf: Callable[[int], T], node: Callable[[T, T], T]) -> T:
    """Post-order reduction of ``tree`` without recursion."""
    out: List[T] = []
    stack: List[Tuple[Tree, bool]] = [(tree, False)]
    while stack:
        t, expanded = stack.pop()
        if isinstance(t, int):
            out.append(leaf(t))
        elif expanded:
            b = out.pop()
            a = out.pop()
            out.append(node(a, b))
        else:
            stack.append((t, True))
            stack.append((t[1], False))
            stack.append((t[0], False))
    return out[0]


def preorder(tree: Tree) -> Iterator[Tree]:
    stack = [tree]
    while stack:
        t = stack.pop()
        yield t
        if not isinstance(t, int):
            stack.append(t[1])
            stack.append(t[0])


def leaves(tree: Tree) -> List[int]:
    return [t for t in preorder(tree) if isinstance(t, int)]


def num_leaves(tree: Tree) -> int:
    return sum(1 for t in preorder(tree) if isinstance(t, int))


def validate(tree: Tree) -> None:
    """Raise ``ValueError`` unless ``tree`` is a well-formed tree."""
    seen = set()
    for t in preorder(tree):
        if isinstance(t, bool):
            raise ValueError("labels must be positive integers")
        if isinstance(t, int):
            if t < 1:
                raise ValueError(f"label {t} is not a positive integer")
            if t in seen:
                raise ValueError(f"duplicate label {t}")
            seen.add(t)
        elif not (isinstance(t, tuple) and len(t) == 2):
            raise ValueError(f"internal node must be a pair, got {t!r}")


# ----------------------------------------------------------------------
# Canonical form and the relabelling action


def _ordered(a: Tuple[Tree, int], b: Tuple[Tree, int]) -> Tuple[Tree, int]:
    if a[1] < b[1]:
        return (a[0], b[0]), a[1]
    return (b[0], a[0]), b[1]


def canonicalize(tree: Tree) -> Tree:
    """Return the canonical representative of ``tree``.

    >>> canonicalize(((3, 4), (2, 1)))
    ((1, 2), (3, 4))
    """
    return fold(tree, lambda x: (x, x), _ordered)[0]


def is_canonical(tree: Tree) -> bool:
    ok = True

    def node(a: int, b: int) -> int:
        nonlocal ok
        ok = ok and a < b
        return min(a, b)

    fold(tree, lambda x: x, node)
    return ok


def apply_permutation(sigma: "Permutation", tree: Tree) -> Tree:
    """Relabel every leaf ``i`` by ``sigma(i)`` and canonicalize."""
    img = sigma.mapping

    def leaf(x):
        try:
            y = img[x]
        except KeyError:
            raise ValueError(f"label {x} is outside the permutation's domain") from None
        return (y, y)

    return fold(tree, leaf, _ordered)[0]


def is_fixed(tree: Tree, sigma: "Permutation") -> bool:
    # Compared as strings: deep tuples hit the interpreter's recursion limit.
    return to_newick(apply_permutation(sigma, tree)) == to_newick(canonicalize(tree))


# ----------------------------------------------------------------------
# Edges


def edges(tree: Tree) -> List[Tree]:
    """Bottom vertices of the ``2n - 1`` edges, in canonical preorder.

    Index 0 is the root-edge.  The list position is the edge reference used
    throughout the package.
    """
    return list(preorder(canonicalize(tree)))


def edge_leafsets(tree: Tree) -> List[frozenset]:
    """Leaf-label set below each edge, aligned with :func:`edges`."""
    out: List[frozenset] = []
    for t in edges(tree):
        out.append(frozenset(leaves(t)))
    return out


def induced_edge_permutation(tree: Tree, sigma: "Permutation") -> List[int]:
    """Map edge index ``e`` to the index of ``sigma(e)``.

    Raises :class:`NotFixedError` when ``sigma`` does not fix ``tree``.
    """
    sets = edge_leafsets(tree)
    where = {s: idx for idx, s in enumerate(sets)}
    img = sigma.mapping
    out = []
    for s in sets:
        target = frozenset(img[x] for x in s)
        if target not in where:
            raise NotFixedError("tree is not fixed by the permutation")
        out.append(where[target])
    return out


# ----------------------------------------------------------------------
# Newick


def to_newick(tree: Tree) -> str:
    """Serialize in canonical child order, e.g. ``((1,2),3);``."""
    tree = canonicalize(tree)
    parts: List[str] = []
    stack: List[Union[Tree, str]] = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, str):
            parts.append(t)
        elif isinstance(t, int):
            parts.append(str(t))
        else:
            parts.append("(")
            stack.extend((")", t[1], ",", t[0]))
    parts.append(";")
    return "".join(parts)


def from_newick(text: str) -> Tree:
    """Parse ``tree := subtree ";"`` with integer labels and binary nodes."""
    if not text.endswith(";"):
        raise NewickError("missing terminating ';'")
    body = text[:-1]
    seen = set()
    # One frame per open parenthesis, collecting that node's children.
    frames: List[List[Tree]] = [[]]
    want_item = True  # after start, '(' or ','; otherwise after a label or ')'
    pos = 0
    n = len(body)
    while pos < n:
        ch = body[pos]
        if want_item and ch == "(":
            frames.append([])
            pos += 1
        elif want_item and ch in _DIGITS:
            end = pos
            while end < n and body[end] in _DIGITS:
                end += 1
            token = body[pos:end]
            if token[0] == "0":
                raise NewickError(f"bad label {token!r} at {pos}")
            label = int(token)
            if label in seen:
                raise NewickError(f"duplicate label {label}")
            seen.add(label)
            frames[-1].append(label)
            want_item = False
            pos = end
        elif not want_item and ch == ",":
            if len(frames) == 1 or len(frames[-1]) != 1:
                raise NewickError(f"misplaced ',' at {pos}")
            want_item = True
            pos += 1
        elif not want_item and ch == ")":
            if len(frames) == 1:
                raise NewickError(f"unbalanced ')' at {pos}")
            kids = frames.pop()
            if len(kids) != 2:
                raise NewickError(f"node closing at {pos} has {len(kids)} children, expected 2")
            frames[-1].append((kids[0], kids[1]))
            pos += 1
        else:
            raise NewickError(f"unexpected {ch!r} at {pos}")
    if want_item or len(frames) != 1:
        raise NewickError("incomplete tree")
    return canonicalize(frames[0][0])


# ----------------------------------------------------------------------
# Permutations


class Permutation:
    """A bijection on a finite set of positive integers.

    Cycles are listed with their minimal element first and sorted by that
    element; ``cycle_type`` is the non-increasing tuple of cycle lengths.
    Composition follows function composition: ``(s * t)(x) == s(t(x))``.
    """

    __slots__ = ("_map", "_cycles", "_type")

    def __init__(self, mapping: Dict[int, int]):
        mapping = dict(mapping)
        if set(mapping.values()) != set(mapping):
            raise ValueError("mapping is not a bijection on its domain")
        self._map = mapping
        self._cycles = None
        self._type = None

    @classmethod
    def identity(cls, labels: Iterable[int]) -> "Permutation":
        return cls({x: x for x in labels})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], ground_set: Iterable[int] = ()) -> "Permutation":
        mapping = {x: x for x in ground_set}
        seen = set()
        for cyc in cycles:
            cyc = list(cyc)
            for idx, x in enumerate(cyc):
                if x in seen:
                    raise ValueError(f"element {x} appears twice")
                seen.add(x)
                mapping[x] = cyc[(idx + 1) % len(cyc)]
        return cls(mapping)

    @property
    def mapping(self) -> Dict[int, int]:
        return self._map

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def __call__(self, x: int) -> int:
        return self._map[x]

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.domain != other.domain:
            raise ValueError("domains differ")
        return Permutation({x: self._map[other._map[x]] for x in other._map})

    def __pow__(self, e: int) -> "Permutation":
        out = {}
        for cyc in self.cycles:
            size = len(cyc)
            for idx, x in enumerate(cyc):
                out[x] = cyc[(idx + e) % size]
        return Permutation(out)

    def inverse(self) -> "Permutation":
        return Permutation({y: x for x, y in self._map.items()})

    @property
    def cycles(self) -> Tuple[Tuple[int, ...], ...]:
        if self._cycles is None:
            done = set()
            cycles = []
            for start in sorted(self._map):
                if start in done:
                    continue
                cyc = [start]
                done.add(start)
                x = self._map[start]
                while x != start:
                    cyc.append(x)
                    done.add(x)
                    x = self._map[x]
                cycles.append(tuple(cyc))
            self._cycles = tuple(cycles)
        return self._cycles

    @property
    def cycle_type(self) -> Partition:
        if self._type is None:
            self._type = tuple(sorted((len(c) for c in self.cycles), reverse=True))
        return self._type

    def largest_cycle(self) -> Tuple[int, ...]:
        """A longest cycle; ties go to the smallest minimal element."""
        best = self.cycles[0]
        for cyc in self.cycles[1:]:
            if len(cyc) > len(best):
                best = cyc
        return best

    def restrict(self, labels: Iterable[int]) -> "Permutation":
        labels = set(labels)
        out = {x: self._map[x] for x in labels}
        if set(out.values()) != labels:
            raise ValueError("label set is not invariant under the permutation")
        return Permutation(out)

    def __str__(self) -> str:
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles)

    def __repr__(self) -> str:
        return f"Permutation({self})"


def parse_permutation(text: str, ground_set: Iterable[int] | None = None) -> Permutation:
    """Parse cycle notation such as ``"(1,4,3)(5)(2,6)"``.

    Elements of ``ground_set`` that are not mentioned are fixed points.  With
    no ground set, the domain is ``{1..max label}``.
    """
    cycles: List[List[int]] = []
    s = "".join(text.split())
    pos = 0
    while pos < len(s):
        if s[pos] != "(":
            raise CycleNotationError(f"expected '(' at {pos} in {text!r}")
        end = s.find(")", pos)
        if end < 0:
            raise CycleNotationError(f"unclosed '(' at {pos} in {text!r}")
        inner = s[pos + 1:end]
        if "(" in inner or not inner:
            raise CycleNotationError(f"malformed cycle at {pos} in {text!r}")
        cyc = []
        for token in inner.split(","):
            if not token or not set(token) <= _DIGITS or token[0] == "0":
                raise CycleNotationError(f"bad label {token!r} in {text!r}")
            cyc.append(int(token))
        cycles.append(cyc)
        pos = end + 1

    mentioned = [x for c in cycles for x in c]
    if len(set(mentioned)) != len(mentioned):
        dup = next(x for x in mentioned if mentioned.count(x) > 1)
        raise CycleNotationError(f"element {dup} appears twice in {text!r}")
    if ground_set is None:
        if not mentioned:
            raise CycleNotationError("empty cycle notation needs an explicit ground set")
        ground = set(range(1, max(mentioned) + 1))
    else:
        ground = set(ground_set)
        outside = [x for x in mentioned if x not in ground]
        if outside:
            raise CycleNotationError(f"element {outside[0]} is outside the ground set")
    return Permutation.from_cycles(cycles, ground)
