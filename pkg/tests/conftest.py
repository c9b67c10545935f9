import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from mccolor.graph import Graph

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_edges  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def k3():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)], name="K3")


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)], name="P3")


@pytest.fixture
def data_dir():
    return DATA


def make_random_graph(n: int, p: float, seed: int) -> Graph:
    return Graph.from_edges(n, random_edges(n, p, random.Random(seed)), name=f"rand{n}_{seed}")


@st.composite
def small_graphs(draw, max_vertices=12, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])
