"""
Distances and structural invariants of graphs.

All-pairs distances run on scipy's compiled csgraph routines: unweighted
breadth-first search for the hop metric and Dijkstra for the weight metric.
Large graphs are processed in source chunks so only eccentricities, not the
full distance matrix, are kept in memory.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Iterator, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csgraph

from .exceptions import DisconnectedGraphError, ValidationError
from .graph import Graph, resolve_node

# Sources per shortest-path batch when only reductions are needed
DISTANCE_CHUNK = 512


class Metric(str, Enum):
    """Path-length metric: unit cost per edge or summed edge weights."""

    HOP = "hop"
    WEIGHT = "weight"

    @classmethod
    def parse(cls, value: Union[str, "Metric"]) -> "Metric":
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(value, "Unknown metric", "'hop' or 'weight'")


@dataclass(frozen=True)
class InvariantRecord:
    """Structural invariants of a connected graph."""

    order: int
    edge_count: int
    diameter: int
    weighted_diameter: float
    eccentricity_of_root: int
    weighted_eccentricity_of_root: float
    mean_distance: float
    pair_mean_distance: float
    max_degree: int
    max_valency: float
    total_edge_weight: float

    def to_dict(self) -> Dict[str, Union[int, float]]:
        return asdict(self)


def shortest_paths(
    graph: Graph,
    metric: Union[str, Metric] = Metric.HOP,
    sources: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """
    Distance matrix under the hop or weight metric.

    Args:
        graph (Graph): Input graph
        metric (str | Metric): 'hop' or 'weight'
        sources (Sequence[int], optional): Restrict rows to these sources

    Returns:
        np.ndarray: len(sources) x N distances; unreachable pairs are ``inf``
    """
    metric = Metric.parse(metric)
    indices = None if sources is None else np.asarray(sources, dtype=np.int64)
    distances = csgraph.shortest_path(
        graph.sparse_adjacency(),
        method="D",
        directed=False,
        unweighted=metric is Metric.HOP,
        indices=indices,
    )
    return np.atleast_2d(distances)


def _eccentricity_chunks(graph: Graph, metric: Metric) -> Iterator[np.ndarray]:
    for start in range(0, graph.order, DISTANCE_CHUNK):
        sources = range(start, min(start + DISTANCE_CHUNK, graph.order))
        yield shortest_paths(graph, metric, list(sources))


def eccentricities(graph: Graph, metric: Union[str, Metric] = Metric.HOP) -> np.ndarray:
    """Eccentricity of every node; ``inf`` for nodes that cannot reach everything."""
    metric = Metric.parse(metric)
    return np.concatenate([chunk.max(axis=1) for chunk in _eccentricity_chunks(graph, metric)])


def eccentricity(graph: Graph, node: Optional[int] = None, metric: Union[str, Metric] = Metric.HOP) -> float:
    """Eccentricity of a single node (the root by default)."""
    node = resolve_node(graph, node)
    return float(shortest_paths(graph, metric, [node])[0].max())


def diameter(graph: Graph, metric: Union[str, Metric] = Metric.HOP) -> float:
    return float(eccentricities(graph, metric).max())


def is_connected(graph: Graph) -> bool:
    components, _ = csgraph.connected_components(graph.sparse_adjacency(), directed=False)
    return components == 1


def require_connected(graph: Graph, operation: str) -> None:
    """Raise DisconnectedGraphError unless ``graph`` is connected."""
    components, labels = csgraph.connected_components(graph.sparse_adjacency(), directed=False)
    if components > 1:
        sizes = np.bincount(labels)
        reachable_pairs = int((sizes * (sizes - 1)).sum() // 2)
        total_pairs = graph.order * (graph.order - 1) // 2
        raise DisconnectedGraphError(operation, total_pairs - reachable_pairs)


def invariants(graph: Graph) -> InvariantRecord:
    """
    Measure the structural invariants of a connected graph.

    ``mean_distance`` averages the hop distance over all ordered node pairs,
    self-pairs included (sum over unordered pairs divided by N^2/2);
    ``pair_mean_distance`` averages over distinct unordered pairs only.

    Raises:
        DisconnectedGraphError: If the graph is disconnected
    """
    require_connected(graph, "invariants")
    order = graph.order

    hop_total = 0.0
    hop_diameter = 0.0
    for chunk in _eccentricity_chunks(graph, Metric.HOP):
        hop_total += float(chunk.sum())
        hop_diameter = max(hop_diameter, float(chunk.max()))
    weighted_diameter = float(eccentricities(graph, Metric.WEIGHT).max())

    pairs = order * (order - 1)
    return InvariantRecord(
        order=order,
        edge_count=graph.number_of_edges,
        diameter=int(round(hop_diameter)),
        weighted_diameter=weighted_diameter,
        eccentricity_of_root=int(round(eccentricity(graph, graph.root, Metric.HOP))),
        weighted_eccentricity_of_root=eccentricity(graph, graph.root, Metric.WEIGHT),
        mean_distance=hop_total / (order * order),
        pair_mean_distance=hop_total / pairs if pairs else 0.0,
        max_degree=int(graph.degrees.max()) if order else 0,
        max_valency=float(graph.valencies.max()) if order else 0.0,
        total_edge_weight=graph.total_edge_weight,
    )
