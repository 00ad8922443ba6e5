"""
Closed forms and recursions for hierarchy invariants.

Formulas take measured invariants of the base graph as input and evaluate the
level recursions in exact rational arithmetic, so they can serve as oracles
for the values measured on built hierarchies. Degree-diameter capacity checks
(Moore bound, tree-width capacity) live here as well.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from .exceptions import ValidationError
from .graph import Graph
from .input_validators import InputValidator
from .metrics import Metric, diameter, eccentricity

# Type aliases
Number = Union[int, float, Fraction]


def _exact(value: Number) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _positive_exact(value: Number, name: str = "alpha") -> Fraction:
    InputValidator.validate_positive_weight(value, name)
    return _exact(value)


class Regime(str, Enum):
    """Scaling regime of a geometric K_n hierarchy with level weight α."""

    SKINNY = "alpha<1"
    UNIFORM = "alpha=1"
    FAT = "1<alpha<n"
    CRITICAL = "alpha=n"
    SUPERCRITICAL = "alpha>n"

    @classmethod
    def classify(cls, n: int, alpha: Number) -> "Regime":
        alpha = _exact(alpha)
        if alpha < 1:
            return cls.SKINNY
        if alpha == 1:
            return cls.UNIFORM
        if alpha < n:
            return cls.FAT
        if alpha == n:
            return cls.CRITICAL
        return cls.SUPERCRITICAL


@dataclass(frozen=True)
class BaseInvariants:
    """Invariants of a base graph that feed the hierarchy recursions."""

    order: int
    diameter: Fraction
    root_eccentricity: Fraction
    weighted_diameter: Fraction
    weighted_root_eccentricity: Fraction
    max_degree: int
    root_degree: int
    total_edge_weight: Fraction

    @classmethod
    def from_graph(cls, graph: Graph) -> "BaseInvariants":
        """Measure a base graph (hop and weight metrics, root as given)."""
        return cls(
            order=graph.order,
            diameter=_exact(diameter(graph, Metric.HOP)),
            root_eccentricity=_exact(eccentricity(graph, graph.root, Metric.HOP)),
            weighted_diameter=_exact(diameter(graph, Metric.WEIGHT)),
            weighted_root_eccentricity=_exact(eccentricity(graph, graph.root, Metric.WEIGHT)),
            max_degree=int(graph.degrees.max()),
            root_degree=graph.degree(graph.root),
            total_edge_weight=_exact(graph.total_edge_weight),
        )


@dataclass(frozen=True)
class FormulaRecord:
    """Predicted invariants of a k-level hierarchy of one base graph."""

    diameter: Fraction
    root_eccentricity: Fraction
    weighted_diameter: Fraction
    weighted_root_eccentricity: Fraction
    max_degree: int
    total_edge_weight: Fraction
    regime: Optional[Regime] = None

    def to_dict(self) -> Dict[str, object]:
        data = {key: float(value) if isinstance(value, Fraction) else value for key, value in asdict(self).items()}
        data["regime"] = self.regime.value if self.regime else None
        return data


def _geometric_ratio(alphas: Sequence[Fraction]) -> Optional[Fraction]:
    if len(alphas) < 2:
        return None
    ratio = alphas[1]
    if all(a == ratio ** i for i, a in enumerate(alphas)):
        return ratio
    return None


def hierarchy_formulas(base: BaseInvariants, depth: int, alphas: Sequence[Number]) -> FormulaRecord:
    """
    Evaluate the level recursions for G^{⊓k} with level weights ``alphas``.

    δ = 2(k-1)ε(G) + δ(G); ε = kε(G); Δ = (k-1)deg(root) + Δ(G);
    w = w(G) Σ α_i n^{k-i}; δ_w = 2ε_w(G) Σ_{j<k} α_j + α_k δ_w(G);
    ε_w = ε_w(G) Σ_{j<=k} α_j.

    Args:
        base (BaseInvariants): Measured base-graph invariants
        depth (int): Number of levels k >= 1
        alphas (Sequence): Absolute level weights, bottom first, alphas[0] == 1

    Returns:
        FormulaRecord: Exact predictions; the regime is set for geometric weights

    Raises:
        ValidationError: On a bad depth, weight count or bottom weight
    """
    depth = InputValidator.validate_integer(depth, 1, "depth")
    weights = [_positive_exact(a) for a in alphas]
    if len(weights) != depth:
        raise ValidationError(len(weights), "One level weight per level required", f"{depth} weights")
    if weights[0] != 1:
        raise ValidationError(weights[0], "Bottom level weight must be 1")

    n = base.order
    below_top = sum(weights[:-1], Fraction(0))
    ratio = _geometric_ratio(weights)
    return FormulaRecord(
        diameter=2 * (depth - 1) * base.root_eccentricity + base.diameter,
        root_eccentricity=depth * base.root_eccentricity,
        weighted_diameter=2 * base.weighted_root_eccentricity * below_top + weights[-1] * base.weighted_diameter,
        weighted_root_eccentricity=base.weighted_root_eccentricity * sum(weights, Fraction(0)),
        max_degree=(depth - 1) * base.root_degree + base.max_degree,
        total_edge_weight=base.total_edge_weight * sum(
            (a * n ** (depth - i) for i, a in enumerate(weights, start=1)), Fraction(0)
        ),
        regime=Regime.classify(n, ratio) if ratio is not None else None,
    )


def formulas_for_graph(base: Graph, depth: int, alphas: Sequence[Number]) -> FormulaRecord:
    """Shorthand: measure ``base`` and evaluate :func:`hierarchy_formulas`."""
    return hierarchy_formulas(BaseInvariants.from_graph(base), depth, alphas)


def kn_weighted_diameter(n: int, depth: int, alpha: Number) -> Fraction:
    """δ_w(K_n^{⊓k}) = (α^k + α^{k-1} - 2)/(α - 1), or 2k - 1 at α = 1."""
    InputValidator.validate_integer(n, 2, "n")
    depth = InputValidator.validate_integer(depth, 1, "depth")
    alpha = _positive_exact(alpha)
    if alpha == 1:
        return Fraction(2 * depth - 1)
    return (alpha ** depth + alpha ** (depth - 1) - 2) / (alpha - 1)


def kn_total_weight(n: int, depth: int, alpha: Number) -> Fraction:
    """w(K_n^{⊓k}) = n(n-1)/2 · (n^k - α^k)/(n - α), or n(n-1)/2 · k n^{k-1} at α = n."""
    n = InputValidator.validate_integer(n, 2, "n")
    depth = InputValidator.validate_integer(depth, 1, "depth")
    alpha = _positive_exact(alpha)
    edges = Fraction(n * (n - 1), 2)
    if alpha == n:
        return edges * depth * n ** (depth - 1)
    return edges * (n ** depth - alpha ** depth) / (n - alpha)


def regime_exponents(n: int, alpha: Number) -> Tuple[float, float]:
    """
    Asymptotic exponents of N for (weighted diameter, total edge weight).

    Logarithmic factors are dropped: α <= 1 gives (0, 1) and α = n gives (1, 1).
    """
    n = InputValidator.validate_integer(n, 2, "n")
    alpha = float(InputValidator.validate_positive_weight(alpha, "alpha"))
    log_alpha = math.log(alpha, n)
    return max(0.0, log_alpha), max(1.0, log_alpha)


def embedding_alpha(n: int, dimension: int) -> float:
    """Level weight n^{1/d} that models link length when each level is laid out in d dimensions."""
    n = InputValidator.validate_integer(n, 2, "n")
    dimension = InputValidator.validate_integer(dimension, 1, "dimension")
    return n ** (1.0 / dimension)


def truncated_node_count(n: int, depth: int) -> int:
    """N = Σ_{i=0}^{k} (n-1)^i, evaluated in closed form."""
    n = InputValidator.validate_integer(n, 2, "n")
    depth = InputValidator.validate_integer(depth, 0, "depth")
    if n == 2:
        return depth + 1
    return ((n - 1) ** (depth + 1) - 1) // (n - 2)


@dataclass(frozen=True)
class DegreeDiameterBounds:
    moore_bound: Fraction
    treewidth_capacity: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {
            "moore_bound": float(self.moore_bound),
            "treewidth_capacity": None if self.treewidth_capacity is None else float(self.treewidth_capacity),
        }


def degree_diameter_checks(max_degree: int, diam: int, treewidth: Optional[int] = None) -> DegreeDiameterBounds:
    """
    Moore bound (Δ(Δ-1)^δ - 2)/(Δ-2) and, given a tree-width t, the capacity t(Δ-1)^{(δ-1)/2}.

    Raises:
        ValidationError: If Δ < 3, δ < 1, or δ is even when a tree-width is given
    """
    max_degree = InputValidator.validate_integer(max_degree, 0, "max_degree")
    if max_degree < 3:
        raise ValidationError(max_degree, "Moore bound needs maximum degree >= 3", "integer >= 3")
    diam = InputValidator.validate_integer(diam, 1, "diameter")
    moore = Fraction(max_degree * (max_degree - 1) ** diam - 2, max_degree - 2)
    capacity = None
    if treewidth is not None:
        treewidth = InputValidator.validate_integer(treewidth, 1, "treewidth")
        if diam % 2 == 0:
            raise ValidationError(diam, "Tree-width capacity needs an odd diameter", "odd integer")
        capacity = Fraction(treewidth * (max_degree - 1) ** ((diam - 1) // 2))
    return DegreeDiameterBounds(moore, capacity)


def truncated_capacity_ratio(n: int, depth: int) -> Fraction:
    """
    n^k over the tree-width capacity of the truncated K_n hierarchy.

    The truncated hierarchy has Δ = 2(n-1), δ = 2k-1 and tree-width n-1.
    The numerator is the order n^k of the full hierarchy with the same
    address length; at n = 3 the ratio is 3/2 for every k.
    """
    n = InputValidator.validate_integer(n, 3, "n")
    depth = InputValidator.validate_integer(depth, 1, "depth")
    bounds = degree_diameter_checks(2 * (n - 1), 2 * depth - 1, n - 1)
    return Fraction(n ** depth) / bounds.treewidth_capacity
