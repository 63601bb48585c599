"""Shared fixtures and strategies for the selection tests."""
import itertools

import pytest
from hypothesis import strategies as st

from config.settings import PATHS
from selection.gadgets import gen_gadget, single_edge
from selection.graph import Graph


def ordered_pairs(n):
    return [(u, v) for u, v in itertools.product(range(1, n + 1), repeat=2) if u != v]


@st.composite
def graphs(draw, min_n=2, max_n=4):
    """Arbitrary loop-free graphs on ``min_n..max_n`` vertices."""
    n = draw(st.integers(min_n, max_n))
    edges = draw(st.sets(st.sampled_from(ordered_pairs(n))))
    return Graph(n, frozenset(edges))


@pytest.fixture
def perm_up():
    return gen_gadget('perm_up')


@pytest.fixture
def edge_pair():
    return single_edge(2)


@pytest.fixture
def graph_dir():
    return PATHS['GRAPHS']
