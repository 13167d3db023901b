"""
pytest configuration and shared fixtures.
"""

import pytest
from hypothesis import settings

from rainbowbounds.graph import EdgeColoredGraph, Graph
from rainbowbounds.happy import build_dp_table

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def triangle():
    """三角形 K3"""
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def triangle_with_isolated():
    """K3 に孤立点を1つ加えたグラフ"""
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path_p4():
    """4頂点のパス 0-1-2-3"""
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star_k13():
    """星 K_{1,3}"""
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def rainbow_k3():
    """3色で塗られた三角形"""
    return EdgeColoredGraph.from_colored_edges(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])


@pytest.fixture
def two_colored_k4():
    """2色しか使わない K4（虹色三角形なし）"""
    edges = [(0, 1, 0), (2, 3, 0), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)]
    return EdgeColoredGraph.from_colored_edges(4, edges)


@pytest.fixture(scope="session")
def dp_table():
    """k_max = 103 の上界表"""
    return build_dp_table(103)
