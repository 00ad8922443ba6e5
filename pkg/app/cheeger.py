"""
Cheeger constant (isoperimetric number) of weighted graphs.

h(G) = min over node subsets S of w(∂S) / min(|S|, |S̄|). The exact mode
enumerates every bipartition with a split Gray-code sweep: cut values for all
subsets of the low node block are tabulated once, and the high block is
walked in Gray-code order so each step updates the cross term by one row.
The heuristic mode returns the best of Fiedler sweep cuts and module cuts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.sparse.linalg import eigsh

from .exceptions import GraphError, ValidationError
from .graph import Graph, module_blocks
from .metrics import require_connected

logger = logging.getLogger(__name__)

EXACT_MAX_ORDER = 30
LOW_BLOCK_BITS = 15
DENSE_EIGEN_MAX_ORDER = 2048
# Contiguous module ranges are enumerated exhaustively up to this block count
MODULE_RANGE_LIMIT = 64


class CheegerMode(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"

    @classmethod
    def parse(cls, value: Union[str, "CheegerMode"]) -> "CheegerMode":
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(value, "Unknown Cheeger mode", "'exact' or 'heuristic'")


@dataclass(frozen=True)
class CheegerResult:
    """Cheeger value with a subset achieving it."""

    value: float
    cut: Tuple[int, ...]
    mode: CheegerMode

    def to_dict(self) -> dict:
        return {"value": self.value, "cut": list(self.cut), "mode": self.mode.value}


def cut_weight(graph: Graph, subset) -> float:
    """Total weight of edges leaving ``subset``."""
    inside = np.zeros(graph.order, dtype=bool)
    inside[list(subset)] = True
    u, v, w = graph.edge_arrays
    return float(w[inside[u] != inside[v]].sum())


def cut_ratio(graph: Graph, subset) -> float:
    """w(∂S) / min(|S|, |S̄|) for a proper nonempty subset."""
    size = len(set(subset))
    if not 0 < size < graph.order:
        raise ValidationError(size, "Cut side must be a proper nonempty subset", f"1..{graph.order - 1} nodes")
    return cut_weight(graph, subset) / min(size, graph.order - size)


def _subset_matrix(bits: int) -> np.ndarray:
    masks = np.arange(1 << bits, dtype=np.int64)
    return ((masks[:, None] >> np.arange(bits)) & 1).astype(float)


def exact_cheeger(graph: Graph, max_order: int = EXACT_MAX_ORDER) -> CheegerResult:
    """
    True Cheeger constant by enumeration of all 2^(N-1) bipartitions.

    The last node is pinned to the complement side. Free nodes split into a
    low block (tabulated) and a high block (Gray-code walk).

    Raises:
        GraphError: If the graph exceeds ``max_order`` nodes or has fewer than 2
    """
    order = graph.order
    if order > max_order:
        raise GraphError(
            "cheeger",
            f"exact mode supports at most {max_order} nodes, got {order}; use heuristic mode",
        )
    if order < 2:
        raise GraphError("cheeger", "need at least 2 nodes")

    laplacian = graph.laplacian()
    free = order - 1
    low_bits = min(free, LOW_BLOCK_BITS)
    high_bits = free - low_bits
    low = slice(0, low_bits)
    high = slice(low_bits, free)

    x_low = _subset_matrix(low_bits)
    low_sizes = x_low.sum(axis=1)
    low_quadratic = ((x_low @ laplacian[low, low]) * x_low).sum(axis=1)
    coupling = 2.0 * laplacian[high, low]
    high_block = laplacian[high, high]

    best_value = np.inf
    best_low = 0
    best_high = 0
    x_high = np.zeros(high_bits)
    cross = np.zeros(low_bits)
    gray_prev = 0
    for step in range(1 << high_bits):
        gray = step ^ (step >> 1)
        flipped = gray ^ gray_prev
        if flipped:
            bit = flipped.bit_length() - 1
            sign = 1.0 if gray & flipped else -1.0
            x_high[bit] += sign
            cross += sign * coupling[bit]
        gray_prev = gray

        constant = float(x_high @ high_block @ x_high)
        sizes = low_sizes + x_high.sum()
        cuts = low_quadratic + x_low @ cross + constant
        denominators = np.minimum(sizes, order - sizes)
        ratios = np.full_like(cuts, np.inf)
        np.divide(cuts, denominators, out=ratios, where=denominators > 0)
        index = int(np.argmin(ratios))
        if ratios[index] < best_value - 1e-12:
            best_value = float(ratios[index])
            best_low = index
            best_high = gray

    subset = [i for i in range(low_bits) if best_low >> i & 1]
    subset += [low_bits + i for i in range(high_bits) if best_high >> i & 1]
    logger.debug("exact cheeger on %d nodes: %.6f", order, best_value)
    return CheegerResult(best_value, tuple(subset), CheegerMode.EXACT)


def fiedler_vector(graph: Graph) -> np.ndarray:
    """Eigenvector of the second-smallest Laplacian eigenvalue."""
    if graph.order <= DENSE_EIGEN_MAX_ORDER:
        _, vectors = np.linalg.eigh(graph.laplacian())
        return vectors[:, 1]
    adjacency = graph.sparse_adjacency()
    laplacian = (-adjacency).tolil()
    laplacian.setdiag(graph.valencies)
    _, vectors = eigsh(laplacian.tocsr(), k=2, sigma=-1e-6, which="LM")
    return vectors[:, 1]


def fiedler_sweep(graph: Graph) -> Tuple[float, Tuple[int, ...]]:
    """Best prefix cut of the nodes sorted by the Fiedler vector."""
    order = graph.order
    ranking = np.argsort(fiedler_vector(graph), kind="stable")
    weights = graph.adjacency()[np.ix_(ranking, ranking)]
    increments = weights.sum(axis=1) - 2.0 * np.tril(weights, -1).sum(axis=1)
    cuts = np.cumsum(increments)[:-1]
    sizes = np.arange(1, order)
    ratios = cuts / np.minimum(sizes, order - sizes)
    best = int(np.argmin(ratios))
    return float(ratios[best]), tuple(sorted(int(v) for v in ranking[: best + 1]))


def _module_candidates(graph: Graph) -> List[range]:
    candidates: List[range] = []
    for block in module_blocks(graph):
        count = graph.order // block
        if count <= MODULE_RANGE_LIMIT:
            spans = [(a, b) for a in range(count) for b in range(a + 1, count + 1) if b - a < count]
        else:
            spans = [(a, a + 1) for a in range(count)] + [(0, b) for b in range(1, count)]
        candidates.extend(range(a * block, b * block) for a, b in spans)
    return candidates


def module_cut(graph: Graph) -> Optional[Tuple[float, Tuple[int, ...]]]:
    """
    Best cut made of whole modules that are contiguous in index order.

    Returns None for graphs without module metadata.
    """
    best: Optional[Tuple[float, Tuple[int, ...]]] = None
    for nodes in _module_candidates(graph):
        value = cut_ratio(graph, nodes)
        if best is None or value < best[0] - 1e-12:
            best = (value, tuple(nodes))
    return best


def heuristic_cheeger(graph: Graph) -> CheegerResult:
    """Upper bound on h(G): minimum of Fiedler sweep cuts and module cuts."""
    if graph.order < 2:
        raise GraphError("cheeger", "need at least 2 nodes")
    value, cut = fiedler_sweep(graph)
    modules = module_cut(graph)
    if modules is not None and modules[0] < value - 1e-12:
        value, cut = modules
    return CheegerResult(value, cut, CheegerMode.HEURISTIC)


def cheeger(
    graph: Graph,
    mode: Union[str, CheegerMode] = CheegerMode.EXACT,
    max_order: int = EXACT_MAX_ORDER,
) -> CheegerResult:
    """
    Cheeger constant in exact or heuristic mode.

    Raises:
        DisconnectedGraphError: If the graph is disconnected
        GraphError: If exact mode is requested above ``max_order`` nodes
    """
    mode = CheegerMode.parse(mode)
    require_connected(graph, "cheeger")
    if mode is CheegerMode.EXACT:
        return exact_cheeger(graph, max_order)
    return heuristic_cheeger(graph)
