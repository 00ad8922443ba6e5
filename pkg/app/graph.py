"""
Weighted simple rooted graphs.

The Graph type is the substrate every other module works on: an immutable,
undirected, positively weighted graph on nodes 0..N-1 with a distinguished
root. Hierarchy builders attach level metadata so module structure can be
recovered without re-deriving it from the edges.
"""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from .exceptions import GraphError, ValidationError
from .input_validators import InputValidator

# Type aliases
EdgeKey = Tuple[int, int]
WeightedEdge = Tuple[int, int, float]


def _canonical(i: int, j: int) -> EdgeKey:
    return (i, j) if i < j else (j, i)


class Graph:
    """
    Immutable weighted simple rooted graph.

    Edges are stored once per unordered pair under the canonical key (i, j)
    with i < j. ``levels`` lists the base-graph orders of a hierarchy from the
    top level down; it is empty for graphs without module structure.
    """

    def __init__(
        self,
        order: int,
        edges: Mapping[EdgeKey, float],
        root: int = 0,
        levels: Sequence[int] = (),
        label: str = "",
    ):
        """
        Wrap already-validated data. Use :func:`build_graph` for untrusted input.

        Args:
            order (int): Node count N
            edges (Mapping): Canonical (i, j) -> weight map
            root (int): Root node index
            levels (Sequence[int]): Base orders of a hierarchy, top level first
            label (str): Human-readable name used in reports
        """
        self._order = int(order)
        self._edges: Dict[EdgeKey, float] = dict(sorted(edges.items()))
        self._root = int(root)
        self._levels = tuple(int(n) for n in levels)
        self._label = label

    # ------------------------------------------------------------------ basics

    @property
    def order(self) -> int:
        return self._order

    @property
    def root(self) -> int:
        return self._root

    @property
    def levels(self) -> Tuple[int, ...]:
        return self._levels

    @property
    def label(self) -> str:
        return self._label

    @property
    def number_of_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> Iterator[WeightedEdge]:
        """Yield (i, j, w) with i < j in lexicographic order."""
        for (i, j), w in self._edges.items():
            yield i, j, w

    def weight(self, i: int, j: int) -> float:
        """Weight of edge {i, j}; 0.0 when absent."""
        if i == j:
            return 0.0
        return self._edges.get(_canonical(i, j), 0.0)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and _canonical(i, j) in self._edges

    @cached_property
    def _neighbors(self) -> List[List[int]]:
        table: List[List[int]] = [[] for _ in range(self._order)]
        for i, j in self._edges:
            table[i].append(j)
            table[j].append(i)
        return [sorted(row) for row in table]

    def neighbors(self, node: int) -> List[int]:
        return list(self._neighbors[node])

    def degree(self, node: int) -> int:
        """Number of edges incident to ``node``."""
        return len(self._neighbors[node])

    def valency(self, node: int) -> float:
        """Sum of the weights incident to ``node``."""
        return float(self.valencies[node])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(row) for row in self._neighbors], dtype=np.int64)

    @cached_property
    def valencies(self) -> np.ndarray:
        u, v, w = self.edge_arrays
        return (
            np.bincount(u, weights=w, minlength=self._order)
            + np.bincount(v, weights=w, minlength=self._order)
        )

    @property
    def total_edge_weight(self) -> float:
        return float(sum(self._edges.values()))

    # ---------------------------------------------------------------- matrices

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edges as parallel (u, v, w) arrays, sorted lexicographically."""
        if not self._edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), np.zeros(0)
        keys = np.array(list(self._edges.keys()), dtype=np.int64)
        weights = np.array(list(self._edges.values()), dtype=float)
        return keys[:, 0], keys[:, 1], weights

    @cached_property
    def _dense_adjacency(self) -> np.ndarray:
        adjacency = np.zeros((self._order, self._order))
        u, v, w = self.edge_arrays
        adjacency[u, v] = w
        adjacency[v, u] = w
        adjacency.setflags(write=False)
        return adjacency

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (a fresh copy)."""
        return self._dense_adjacency.copy()

    def laplacian(self) -> np.ndarray:
        """Algebraic Laplacian diag(valency) - A."""
        adjacency = self.adjacency()
        return np.diag(adjacency.sum(axis=1)) - adjacency

    def sparse_adjacency(self) -> sparse.csr_matrix:
        u, v, w = self.edge_arrays
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([w, w])
        return sparse.csr_matrix((data, (rows, cols)), shape=(self._order, self._order))

    # ---------------------------------------------------------- derived graphs

    def scaled(self, alpha: float) -> "Graph":
        """Copy with every weight multiplied by ``alpha``."""
        alpha = InputValidator.validate_positive_weight(alpha, "alpha")
        edges = {key: w * alpha for key, w in self._edges.items()}
        return Graph(self._order, edges, self._root, self._levels, self._label)

    def with_weights(self, weights: Mapping[EdgeKey, float]) -> "Graph":
        """Copy with the same edge set and new weights (must cover every edge)."""
        missing = set(self._edges) - set(weights)
        if missing:
            raise GraphError("reweight", f"{len(missing)} edges have no new weight")
        edges = {key: InputValidator.validate_positive_weight(weights[key]) for key in self._edges}
        return Graph(self._order, edges, self._root, self._levels, self._label)

    def with_root(self, root: int) -> "Graph":
        root = InputValidator.validate_node_index(root, self._order, "root")
        return Graph(self._order, self._edges, root, (), self._label)

    def with_label(self, label: str) -> "Graph":
        return Graph(self._order, self._edges, self._root, self._levels, label)

    def rooted_at_zero(self) -> "Graph":
        """Relabel nodes so the root becomes node 0 by swapping it with node 0."""
        if self._root == 0:
            return self
        swap = {0: self._root, self._root: 0}
        edges = {
            _canonical(swap.get(i, i), swap.get(j, j)): w for (i, j), w in self._edges.items()
        }
        return Graph(self._order, edges, 0, (), self._label)

    def induced_subgraph(self, nodes: Sequence[int]) -> "Graph":
        """Subgraph on ``nodes`` reindexed in the given order; root maps if kept, else 0."""
        index = {node: position for position, node in enumerate(nodes)}
        edges = {
            _canonical(index[i], index[j]): w
            for (i, j), w in self._edges.items()
            if i in index and j in index
        }
        return Graph(len(nodes), edges, index.get(self._root, 0), (), self._label)

    # ---------------------------------------------------------------- networkx

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, root=None, label: str = "") -> "Graph":
        """
        Convert a networkx graph; nodes are indexed in sorted order.

        Args:
            nx_graph (nx.Graph): Source graph; edge attribute ``weight`` defaults to 1
            root: networkx node to use as root (defaults to the first sorted node)
            label (str): Label for the new graph
        """
        nodes = sorted(nx_graph.nodes())
        index = {node: position for position, node in enumerate(nodes)}
        edge_list = [
            (index[a], index[b], float(data.get("weight", 1.0)))
            for a, b, data in nx_graph.edges(data=True)
        ]
        root_index = index[root] if root is not None else 0
        return build_graph(len(nodes), edge_list, root_index, label=label)

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self._order))
        nx_graph.add_weighted_edges_from(self.edges())
        return nx_graph

    # ------------------------------------------------------------------ dunder

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._order == other._order
            and self._root == other._root
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self._order, self._root, tuple(self._edges.items())))

    def __repr__(self) -> str:
        name = f"'{self._label}', " if self._label else ""
        return f"Graph({name}order={self._order}, edges={len(self._edges)}, root={self._root})"


def build_graph(
    order: int,
    edge_list: Iterable[Tuple[int, int, float]],
    root: int = 0,
    levels: Sequence[int] = (),
    label: str = "",
) -> Graph:
    """
    Build a Graph from an edge list, enforcing simplicity.

    Args:
        order (int): Node count (>= 1)
        edge_list (Iterable): (i, j, w) triples in any order
        root (int): Root node index
        levels (Sequence[int]): Optional hierarchy metadata, top level first
        label (str): Optional name

    Returns:
        Graph: The validated graph

    Raises:
        GraphError: On self-edges or duplicate unordered pairs
        ValidationError: On out-of-range indices or nonpositive weights
    """
    order = InputValidator.validate_integer(order, 1, "order")
    root = InputValidator.validate_node_index(root, order, "root")
    edges: Dict[EdgeKey, float] = {}
    for entry in edge_list:
        try:
            i, j, w = entry
        except (TypeError, ValueError):
            raise ValidationError(entry, "Edge must be an (i, j, w) triple", "(int, int, float)")
        i = InputValidator.validate_node_index(i, order, "edge endpoint")
        j = InputValidator.validate_node_index(j, order, "edge endpoint")
        if i == j:
            raise GraphError("build", f"self-edge at node {i}")
        key = _canonical(i, j)
        if key in edges:
            raise GraphError("build", f"duplicate edge {key}")
        edges[key] = InputValidator.validate_positive_weight(w)
    if levels and int(np.prod(levels)) != order:
        raise GraphError("build", f"level orders {tuple(levels)} do not multiply to {order}")
    return Graph(order, edges, root, levels, label)


def matrices(graph: Graph) -> Tuple[np.ndarray, np.ndarray]:
    """Return the (adjacency, laplacian) pair of ``graph``."""
    return graph.adjacency(), graph.laplacian()


def unit_graph(order: int, pairs: Iterable[Tuple[int, int]], root: int = 0, label: str = "") -> Graph:
    """Shorthand for a unit-weight graph from bare (i, j) pairs."""
    return build_graph(order, ((i, j, 1.0) for i, j in pairs), root, label=label)


def module_blocks(graph: Graph) -> List[int]:
    """
    Block sizes of the module structure, largest first, excluding the whole graph.

    For a hierarchy with level orders (n_k, ..., n_1) the level-i modules are
    contiguous index ranges of size n_{i-1} * ... * n_1.
    """
    sizes: List[int] = []
    levels = graph.levels
    for depth in range(1, len(levels)):
        sizes.append(int(np.prod(levels[depth:])))
    return sizes


def resolve_node(graph: Graph, node: Optional[int]) -> int:
    """Resolve an optional node argument to a valid index, defaulting to the root."""
    if node is None:
        return graph.root
    return InputValidator.validate_node_index(node, graph.order, "node")
