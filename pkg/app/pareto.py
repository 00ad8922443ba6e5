"""
Pareto comparison of topologies on weighted diameter, maximum degree and total edge weight.

Records are compared at a shared order N. Concrete records hold measured
values; scaling records hold log-log growth exponents fitted over a family
of sizes, which lets families of slightly different concrete sizes be
compared at a common reference order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exceptions import ValidationError
from .graph import Graph
from .input_validators import InputValidator
from .metrics import Metric, diameter
from .products import HierarchySpec, build_hierarchy
from .topologies import TopologyFactory

METRIC_FIELDS = ("weighted_diameter", "max_degree", "total_edge_weight")


@dataclass(frozen=True)
class MetricTuple:
    """The three minimized metrics of one topology at order N."""

    label: str
    weighted_diameter: float
    max_degree: float
    total_edge_weight: float
    order: int

    def __post_init__(self):
        for name in METRIC_FIELDS:
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(getattr(self, name), f"{name} must be finite")
        if self.order < 2:
            raise ValidationError(self.order, "order must be at least 2")

    @property
    def values(self) -> Tuple[float, float, float]:
        return tuple(float(getattr(self, name)) for name in METRIC_FIELDS)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def measure(graph: Graph, label: str = "") -> MetricTuple:
    """Measured metrics of a connected graph."""
    return MetricTuple(
        label=label or graph.label,
        weighted_diameter=diameter(graph, Metric.WEIGHT),
        max_degree=float(graph.degrees.max()),
        total_edge_weight=graph.total_edge_weight,
        order=graph.order,
    )


def dominates(first: MetricTuple, second: MetricTuple, tolerance: float = 0.0) -> bool:
    """
    True when ``first`` is no worse than ``second`` in every metric and strictly better in one.

    Differences within ``tolerance`` count as ties.
    """
    pairs = list(zip(first.values, second.values))
    no_worse = all(a <= b + tolerance for a, b in pairs)
    better = any(a < b - tolerance for a, b in pairs)
    return no_worse and better


def pareto_front(records: Sequence[MetricTuple], tolerance: float = 0.0) -> List[MetricTuple]:
    """
    Non-dominated records, in input order.

    Raises:
        ValidationError: If the records do not share one order N
    """
    orders = {record.order for record in records}
    if len(orders) > 1:
        raise ValidationError(sorted(orders), "Pareto comparison requires a single order N")
    return [
        record for record in records
        if not any(dominates(other, record, tolerance) for other in records if other is not record)
    ]


def _slope(orders: np.ndarray, values: np.ndarray) -> float:
    return float(np.polyfit(np.log(orders), np.log(values), 1)[0])


def scaling_tuple(label: str, graphs: Sequence[Graph], reference_order: int) -> MetricTuple:
    """
    Growth exponents of the three metrics in N, fitted over ``graphs``.

    Raises:
        ValidationError: With fewer than two distinct orders
    """
    measured = [measure(graph) for graph in graphs]
    orders = np.array([record.order for record in measured], dtype=float)
    if len(set(orders)) < 2:
        raise ValidationError(label, "Scaling needs graphs of at least two different orders")
    exponents = {
        name: _slope(orders, np.array([getattr(record, name) for record in measured], dtype=float))
        for name in METRIC_FIELDS
    }
    return MetricTuple(label=label, order=reference_order, **exponents)


def scaling_fleet(sizes: Tuple[int, int] = (3, 4), base_order: int = 4) -> List[MetricTuple]:
    """
    Scaling records for the standard topology comparison.

    Families are built at the orders of the truncated K_n hierarchy with the
    given depths; grid and porcupine use the nearest square orders.
    """
    complete = TopologyFactory.create("complete", base_order)
    truncated = [build_hierarchy(HierarchySpec.uniform(complete, depth, 1.0, truncated=True)) for depth in sizes]
    orders = [graph.order for graph in truncated]
    sides = [max(2, int(round(np.sqrt(order)))) for order in orders]
    families = {
        "complete": [TopologyFactory.create("complete", order) for order in orders],
        "star": [TopologyFactory.create("star", order) for order in orders],
        "cycle": [TopologyFactory.create("cycle", order) for order in orders],
        "grid2d": [TopologyFactory.create("grid", 2, side) for side in sides],
        "porcupine": [TopologyFactory.create("porcupine", side) for side in sides],
        "truncated": truncated,
    }
    return [scaling_tuple(label, graphs, orders[-1]) for label, graphs in families.items()]


def concrete_fleet(order: int = 256, base_order: int = 4) -> List[MetricTuple]:
    """
    Measured records of the standard topologies, all built at ``order`` nodes.

    The grid is square and the porcupine is K_m ⊓ S_m with m² = order; the
    hierarchy is the K_n hierarchy of that order with unit weights.

    Raises:
        ValidationError: If ``order`` is not a perfect square and a power of ``base_order``
    """
    order = InputValidator.validate_integer(order, 4, "order")
    base_order = InputValidator.validate_integer(base_order, 2, "base_order")
    side = math.isqrt(order)
    depth = round(math.log(order, base_order))
    if side * side != order or base_order ** depth != order:
        raise ValidationError(order, f"order must be a perfect square and a power of {base_order}")
    complete = TopologyFactory.create("complete", base_order)
    graphs = {
        "complete": TopologyFactory.create("complete", order),
        "star": TopologyFactory.create("star", order),
        "cycle": TopologyFactory.create("cycle", order),
        "grid2d": TopologyFactory.create("grid", 2, side),
        "porcupine": TopologyFactory.create("porcupine", side),
        "hierarchy": build_hierarchy(HierarchySpec.uniform(complete, depth, 1.0)),
    }
    return [measure(graph, label) for label, graph in graphs.items()]
