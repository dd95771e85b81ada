"""Shared graphs for the test suite."""

import pytest
from hypothesis import strategies as st

from zqforcing.generators import gen_double_star, gen_path, gen_spider, gen_star
from zqforcing.graph import Graph


@pytest.fixture
def double_star() -> Graph:
    # leaves 0, 1, 2 on center 3; center 4 with leaves 5, 6, 7
    return gen_double_star(3, 3)


@pytest.fixture
def claw() -> Graph:
    return gen_star(3)


@pytest.fixture
def spider() -> Graph:
    return gen_spider(1)


@pytest.fixture
def p5() -> Graph:
    return gen_path(5)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 7) -> Graph:
    """Random simple graphs on min_n..max_n vertices."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 10) -> Graph:
    """Random trees: vertex i > 0 attaches to a random earlier vertex."""
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return Graph(n, edges)
