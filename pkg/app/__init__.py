"""Hierarchical-product topology toolkit package exports."""

__version__ = "1.0.0"

from .graph import Graph, build_graph
from .products import HierarchySpec, build_hierarchy, hproduct, truncated_hproduct
from .cli import TopologyCLI

__all__ = [
    "Graph",
    "HierarchySpec",
    "TopologyCLI",
    "build_graph",
    "build_hierarchy",
    "hproduct",
    "truncated_hproduct",
    "__version__",
]
