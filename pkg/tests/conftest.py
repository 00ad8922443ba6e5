"""
Global test configuration and fixtures.
"""

import pytest

from app.config import reset_config
from app.products import HierarchySpec, build_hierarchy, hproduct
from app.topologies import standard_graph


@pytest.fixture(autouse=True)
def clean_config():
    """Each test starts without a cached global configuration."""
    reset_config()
    yield
    reset_config()


@pytest.fixture
def k2():
    return standard_graph("complete", 2)


@pytest.fixture
def k3():
    return standard_graph("complete", 3)


@pytest.fixture
def k4():
    return standard_graph("complete", 4)


@pytest.fixture
def c5():
    return standard_graph("cycle", 5)


@pytest.fixture
def s4():
    return standard_graph("star", 4)


@pytest.fixture
def k3_squared(k3):
    """K3 ⊓ K3 with unit weights: 9 nodes, 12 edges."""
    return build_hierarchy(HierarchySpec.uniform(k3, 2))


@pytest.fixture(scope="session")
def small_world_graphs():
    """The four two-level products of complete graphs and cycles, keyed by label."""
    pairs = [("cycle", 7, "complete", 4), ("complete", 7, "cycle", 4),
             ("cycle", 13, "complete", 5), ("complete", 13, "cycle", 5)]
    graphs = {}
    for upper_kind, upper_n, lower_kind, lower_n in pairs:
        graph = hproduct(standard_graph(upper_kind, upper_n), standard_graph(lower_kind, lower_n))
        graphs[graph.label] = graph
    return graphs


@pytest.fixture(scope="session")
def fleet():
    """Connected unit-weight graphs used by property tests."""
    k3 = standard_graph("complete", 3)
    k4 = standard_graph("complete", 4)
    return [
        standard_graph("complete", 6),
        standard_graph("cycle", 9),
        standard_graph("star", 7),
        standard_graph("path", 6),
        standard_graph("grid", 2, 4),
        standard_graph("porcupine", 4),
        build_hierarchy(HierarchySpec.uniform(k3, 3)),
        build_hierarchy(HierarchySpec.uniform(k4, 2)),
        build_hierarchy(HierarchySpec.uniform(k3, 3, truncated=True)),
        hproduct(standard_graph("cycle", 7), k4),
        hproduct(standard_graph("complete", 7), standard_graph("cycle", 4)),
    ]
