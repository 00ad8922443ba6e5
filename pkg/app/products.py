"""
Hierarchical products of rooted graphs and k-level hierarchy assembly.

The weighted product G ⊓_α H attaches one copy of H to every node of G through
H's root and scales G's edges by α. Node (g, h) of the product has index
g·|H| + h, so a hierarchy index is a mixed-radix number whose digits name the
node inside each level's base graph, with digit 0 at every root position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import AddressError, ProductError
from .graph import EdgeKey, Graph
from .input_validators import InputValidator
from .metrics import is_connected

PRODUCT_SYMBOL = "⊓"


def root_projector(order: int, root: int = 0) -> np.ndarray:
    """Diagonal 0/1 matrix projecting onto the root coordinate."""
    projector = np.zeros((order, order))
    projector[root, root] = 1.0
    return projector


def product_matrix(upper: np.ndarray, lower: np.ndarray, lower_root: int, alpha: float = 1.0) -> np.ndarray:
    """
    Matrix form of the product: ``alpha * upper ⊗ D + I ⊗ lower``.

    Works for adjacency and Laplacian operands alike; D projects onto the
    root of the lower factor.
    """
    identity = np.eye(upper.shape[0])
    projector = root_projector(lower.shape[0], lower_root)
    return alpha * np.kron(upper, projector) + np.kron(identity, lower)


def _levels_of(graph: Graph) -> Tuple[int, ...]:
    return graph.levels or (graph.order,)


def _product_label(upper: Graph, lower: Graph, marker: str = "") -> str:
    if upper.label and lower.label:
        return f"{upper.label} {PRODUCT_SYMBOL}{marker} {lower.label}"
    return ""


def hproduct(upper: Graph, lower: Graph, alpha: float = 1.0) -> Graph:
    """
    Weighted hierarchical product ``upper ⊓_alpha lower``.

    Args:
        upper (Graph): The graph G whose nodes each receive a module
        lower (Graph): The module graph H
        alpha (float): Weight multiplier for G's edges

    Returns:
        Graph: |G|·|H| nodes rooted at (root_G, root_H)

    Raises:
        ValidationError: If alpha is not positive
    """
    alpha = InputValidator.validate_positive_weight(alpha, "alpha")
    size = lower.order
    edges: Dict[EdgeKey, float] = {}
    for g in range(upper.order):
        offset = g * size
        for i, j, w in lower.edges():
            edges[(offset + i, offset + j)] = w
    for a, b, w in upper.edges():
        i, j = a * size + lower.root, b * size + lower.root
        edges[(i, j) if i < j else (j, i)] = alpha * w
    return Graph(
        upper.order * size,
        edges,
        upper.root * size + lower.root,
        _levels_of(upper) + _levels_of(lower),
        _product_label(upper, lower),
    )


def truncated_hproduct(upper: Graph, lower: Graph, alpha: float = 1.0) -> Graph:
    """
    Weighted truncated product: the root of ``upper`` carries no module.

    Built as the full product with the nodes (root_G, h ≠ root_H) removed;
    surviving nodes keep their relative index order.

    Returns:
        Graph: (|G|-1)·|H| + 1 nodes rooted at (root_G, root_H)
    """
    full = hproduct(upper, lower, alpha)
    size = lower.order
    root_block = upper.root * size
    kept = [
        node for node in range(full.order)
        if not (root_block <= node < root_block + size and node - root_block != lower.root)
    ]
    reduced = full.induced_subgraph(kept)
    return Graph(
        reduced.order,
        dict(((i, j), w) for i, j, w in reduced.edges()),
        kept.index(full.root),
        (),
        _product_label(upper, lower, "~"),
    )


@dataclass(frozen=True)
class HierarchySpec:
    """
    Recipe for a k-level hierarchy G_k ⊓ ... ⊓ G_1.

    ``bases`` run from the bottom level G_1 to the top level G_k; ``alphas``
    are the absolute level weights with alphas[0] == 1. Every base is
    re-rooted so its root is node 0.
    """

    bases: Tuple[Graph, ...]
    alphas: Tuple[float, ...]
    truncated: bool = False
    geometric_alpha: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        bases = tuple(self.bases)
        if not bases:
            raise ProductError("spec", "at least one base graph is required")
        alphas = tuple(InputValidator.validate_positive_weight(a, "alpha") for a in self.alphas)
        if len(alphas) != len(bases):
            raise ProductError("spec", f"{len(bases)} bases but {len(alphas)} level weights")
        if alphas[0] != 1.0:
            raise ProductError("spec", f"bottom level weight must be 1, got {alphas[0]}")
        for level, base in enumerate(bases, start=1):
            if base.order < 2:
                raise ProductError("spec", f"base at level {level} has order {base.order} < 2")
            if not is_connected(base):
                raise ProductError("spec", f"base at level {level} is disconnected")
        if self.truncated and len({base.order for base in bases}) > 1:
            raise ProductError("spec", "truncated hierarchies require equal base orders")
        object.__setattr__(self, "bases", tuple(base.rooted_at_zero() for base in bases))
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def geometric(cls, bases: Sequence[Graph], alpha: float, truncated: bool = False) -> "HierarchySpec":
        """Spec with level weights (1, α, α², ...)."""
        alpha = InputValidator.validate_positive_weight(alpha, "alpha")
        alphas = tuple(alpha ** i for i in range(len(bases)))
        return cls(tuple(bases), alphas, truncated, geometric_alpha=alpha)

    @classmethod
    def uniform(cls, base: Graph, depth: int, alpha: float = 1.0, truncated: bool = False) -> "HierarchySpec":
        """k copies of one base graph with geometric level weights."""
        depth = InputValidator.validate_integer(depth, 1, "depth")
        return cls.geometric([base] * depth, alpha, truncated)

    @property
    def depth(self) -> int:
        return len(self.bases)

    @property
    def orders(self) -> Tuple[int, ...]:
        """Base orders from the top level down (the address radices)."""
        return tuple(base.order for base in reversed(self.bases))

    @property
    def relative_weights(self) -> Tuple[float, ...]:
        """β_i = α_i / α_{i-1} for i = 2..k, bottom first."""
        return tuple(self.alphas[i] / self.alphas[i - 1] for i in range(1, self.depth))

    @property
    def order(self) -> int:
        """Node count of the built hierarchy."""
        if self.truncated:
            return truncated_order(self.bases[0].order, self.depth)
        return int(np.prod(self.orders))

    @property
    def label(self) -> str:
        labels = [base.label or f"G{base.order}" for base in reversed(self.bases)]
        symbol = f" {PRODUCT_SYMBOL}~ " if self.truncated else f" {PRODUCT_SYMBOL} "
        return symbol.join(labels)

    def with_alphas(self, alphas: Sequence[float]) -> "HierarchySpec":
        return HierarchySpec(self.bases, tuple(alphas), self.truncated)


def truncated_order(n: int, depth: int) -> int:
    """Node count Σ_{i=0}^{k} (n-1)^i of a k-level truncated hierarchy of order-n bases."""
    return sum((n - 1) ** i for i in range(depth + 1))


def build_hierarchy(spec: HierarchySpec) -> Graph:
    """
    Fold the bases right to left: G_k ⊓_{α_k} (... (G_2 ⊓_{α_2} G_1)).

    Returns:
        Graph: The hierarchy, labelled after the hierarchy spec and rooted at node 0
    """
    combine = truncated_hproduct if spec.truncated else hproduct
    hierarchy = reduce(
        lambda lower, level: combine(spec.bases[level], lower, spec.alphas[level]),
        range(1, spec.depth),
        spec.bases[0],
    )
    return hierarchy.with_label(spec.label)


def hierarchy_adjacency(spec: HierarchySpec) -> np.ndarray:
    """
    Adjacency of a non-truncated hierarchy as an explicit Kronecker sum.

    Level i contributes α_i · I ⊗ ... ⊗ I ⊗ A_i ⊗ D ⊗ ... ⊗ D with identities
    for the levels above and root projectors for the levels below.

    Raises:
        ProductError: For truncated specs
    """
    if spec.truncated:
        raise ProductError("kronecker expansion", "truncated hierarchies have no Kronecker-sum form")
    total = np.zeros((spec.order, spec.order))
    for level, (base, alpha) in enumerate(zip(spec.bases, spec.alphas)):
        above = [np.eye(b.order) for b in reversed(spec.bases[level + 1:])]
        below = [root_projector(b.order, b.root) for b in reversed(spec.bases[:level])]
        factors = above + [base.adjacency()] + below
        total += alpha * reduce(np.kron, factors)
    return total


@dataclass(frozen=True)
class NodeAddress:
    """Digits of a hierarchy node, most significant (top level) first."""

    digits: Tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.digits) + ")"


class AddressCodec:
    """
    Bijection between hierarchy node indices and addresses.

    Non-truncated hierarchies use plain mixed-radix digits. In a truncated
    hierarchy every digit after the first 0 must also be 0, and valid
    addresses are numbered in lexicographic order, which is exactly the
    node order produced by :func:`build_hierarchy`.
    """

    def __init__(self, spec: HierarchySpec):
        self._spec = spec
        self._radices = spec.orders
        self._order = spec.order

    @property
    def radices(self) -> Tuple[int, ...]:
        return self._radices

    def validate(self, digits: Sequence[int]) -> Tuple[int, ...]:
        """
        Check an address, naming the first offending digit.

        Raises:
            AddressError: On wrong length, out-of-range digits or a nonzero digit after a 0 in a truncated spec
        """
        digits = tuple(int(d) for d in digits)
        if len(digits) != len(self._radices):
            raise AddressError(digits, len(digits), f"expected {len(self._radices)} digits")
        seen_zero = False
        for position, (digit, radix) in enumerate(zip(digits, self._radices)):
            if not 0 <= digit < radix:
                raise AddressError(digits, position, f"must lie in 0..{radix - 1}")
            if self._spec.truncated:
                if seen_zero and digit != 0:
                    raise AddressError(digits, position, "nonzero digit after a 0 in a truncated address")
                seen_zero = seen_zero or digit == 0
        return digits

    def encode(self, index: int) -> NodeAddress:
        """Address of node ``index``."""
        index = InputValidator.validate_node_index(index, self._order, "index")
        if not self._spec.truncated:
            digits: List[int] = []
            for radix in reversed(self._radices):
                index, digit = divmod(index, radix)
                digits.append(digit)
            return NodeAddress(tuple(reversed(digits)))

        n = self._radices[0]
        length = len(self._radices)
        digits = []
        remaining = length
        while remaining > 0:
            if index == 0:
                digits.extend([0] * remaining)
                break
            block = truncated_order(n, remaining - 1)
            digit, index = divmod(index - 1, block)
            digits.append(digit + 1)
            remaining -= 1
        return NodeAddress(tuple(digits))

    def decode(self, address) -> int:
        """Index of the node with ``address`` (a NodeAddress or digit sequence)."""
        digits = self.validate(address.digits if isinstance(address, NodeAddress) else address)
        if not self._spec.truncated:
            index = 0
            for digit, radix in zip(digits, self._radices):
                index = index * radix + digit
            return index

        n = self._radices[0]
        index = 0
        for position, digit in enumerate(digits):
            if digit == 0:
                break
            index += 1 + (digit - 1) * truncated_order(n, len(digits) - position - 1)
        return index

    def addresses(self) -> Iterator[NodeAddress]:
        """All valid addresses in index order."""
        for index in range(self._order):
            yield self.encode(index)


def encode_address(spec: HierarchySpec, index: int) -> NodeAddress:
    return AddressCodec(spec).encode(index)


def decode_address(spec: HierarchySpec, address) -> int:
    return AddressCodec(spec).decode(address)
