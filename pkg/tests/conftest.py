import pytest
from hypothesis import strategies as st

from phylofix.core import Permutation, num_leaves


@st.composite
def trees(draw, min_leaves=1, max_leaves=8, labels=None):
    """Random trees built by merging random pairs from a pool of leaves."""
    if labels is None:
        n = draw(st.integers(min_leaves, max_leaves))
        labels = range(1, n + 1)
    pool = list(draw(st.permutations(list(labels))))
    while len(pool) > 1:
        i = draw(st.integers(0, len(pool) - 1))
        a = pool.pop(i)
        j = draw(st.integers(0, len(pool) - 1))
        b = pool.pop(j)
        pool.append((a, b))
    return pool[0]


@st.composite
def permutations_of(draw, n):
    images = draw(st.permutations(list(range(1, n + 1))))
    return Permutation(dict(zip(range(1, n + 1), images)))


@st.composite
def tree_and_permutation(draw, max_leaves=7):
    tree = draw(trees(max_leaves=max_leaves))
    return tree, draw(permutations_of(num_leaves(tree)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if outcome.get_result().failed:
        item._failed = True
