import random

import hypothesis
import pytest
from hypothesis import strategies as st

from leaselab.graphs import Graph, build_graph
from leaselab.leases import LeaseCatalog

hypothesis.settings.register_profile("fast", max_examples=20)
hypothesis.settings.register_profile("thorough", max_examples=200)


@st.composite
def connected_graphs(draw, max_nodes: int = 8) -> Graph:
    """Random connected graph: random spanning tree plus random extra edges."""
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    seed = draw(st.integers(min_value=0, max_value=2**16))
    rng = random.Random(seed)
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.2:
                edges.add((u, v))
    return build_graph(n, sorted(edges))


@st.composite
def catalogs(draw, max_types: int = 3) -> LeaseCatalog:
    """Small catalogs with power-of-two durations and economy of scale."""
    count = draw(st.integers(min_value=1, max_value=max_types))
    exponents = draw(
        st.lists(
            st.integers(min_value=0, max_value=4),
            min_size=count,
            max_size=count,
            unique=True,
        )
    )
    exponents.sort()
    pairs = []
    cost = draw(st.integers(min_value=1, max_value=4))
    prev_d = None
    for e in exponents:
        d = 1 << e
        if prev_d is not None:
            # keep cost non-decreasing and per-unit cost non-increasing
            lo, hi = cost, cost * d // prev_d
            cost = draw(st.integers(min_value=lo, max_value=max(lo, hi)))
        pairs.append((d, cost))
        prev_d = d
    return LeaseCatalog.from_pairs(pairs)


@pytest.fixture
def path3() -> Graph:
    return build_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4() -> Graph:
    return build_graph(4, [(0, 1), (0, 2), (0, 3)])
