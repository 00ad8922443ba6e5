"""
Partition-and-rotate placement of circuits onto K_n hierarchy machines.

The circuit graph weights each qubit pair by its number of two-qubit gates.
Placement recursively partitions the qubits top-down into n balanced groups
per level, which fixes the address digits, then rotates bottom-up so that in
every module the sub-module with the most traffic leaving the module sits at
the root position. Cost is the gate-weighted sum of hop distances.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import PlacementError, ValidationError
from .graph import Graph
from .input_validators import InputValidator
from .metrics import Metric, shortest_paths
from .products import HierarchySpec, build_hierarchy

logger = logging.getLogger(__name__)

# Type aliases
Gate = Tuple[int, int]

DEFAULT_RESTARTS = 3
CANDIDATES_PER_SIDE = 16
PASS_PATIENCE = 50
MAX_PASSES = 20
GAIN_TOLERANCE = 1e-9


class Strategy(str, Enum):
    PARTITION_ROTATE = "partition-rotate"
    NAIVE = "naive"


@dataclass(frozen=True)
class CircuitGraph:
    """Qubit interaction graph: weight = number of gates on the pair."""

    qubits: int
    weights: Mapping[Gate, int]

    @property
    def gate_count(self) -> int:
        return sum(self.weights.values())

    def edges(self) -> Iterable[Tuple[int, int, int]]:
        for (u, v), w in sorted(self.weights.items()):
            yield u, v, w

    def matrix(self, size: Optional[int] = None) -> np.ndarray:
        """Dense symmetric weight matrix, padded with isolated qubits up to ``size``."""
        size = self.qubits if size is None else size
        matrix = np.zeros((size, size))
        for u, v, w in self.edges():
            matrix[u, v] = w
            matrix[v, u] = w
        return matrix


@dataclass(frozen=True)
class Placement:
    """Qubit-to-node mapping on a machine hierarchy with its cost."""

    mapping: Tuple[int, ...]
    cost: int
    naive_cost: int
    machine_spec: HierarchySpec
    seed: Optional[int] = None
    strategy: Strategy = Strategy.PARTITION_ROTATE

    @property
    def ratio(self) -> float:
        return self.cost / self.naive_cost if self.naive_cost else 1.0


def circuit_graph(gates: Iterable[Sequence[int]], qubits: Optional[int] = None) -> CircuitGraph:
    """
    Count two-qubit gates per unordered qubit pair.

    Args:
        gates (Iterable): (u, v) pairs; order within a pair is ignored
        qubits (int, optional): Qubit count; defaults to the largest index + 1

    Raises:
        ValidationError: On a gate acting twice on one qubit or an index out of range
    """
    counts: Counter = Counter()
    highest = -1
    for gate in gates:
        if len(gate) != 2:
            raise ValidationError(gate, "A two-qubit gate names exactly two qubits", "(u, v)")
        u = InputValidator.validate_integer(gate[0], 0, "qubit")
        v = InputValidator.validate_integer(gate[1], 0, "qubit")
        if u == v:
            raise ValidationError(gate, "Gate acts on the same qubit twice", "u != v")
        counts[(u, v) if u < v else (v, u)] += 1
        highest = max(highest, u, v)
    if qubits is None:
        qubits = highest + 1
    elif highest >= qubits:
        raise ValidationError(highest, f"qubit index out of range for {qubits} qubits")
    return CircuitGraph(int(qubits), dict(sorted(counts.items())))


def random_circuit(n_qubits: int, n_gates: int, seed: int) -> List[Gate]:
    """Gates on pairs drawn uniformly from all distinct qubit pairs."""
    n_qubits = InputValidator.validate_integer(n_qubits, 2, "n_qubits")
    n_gates = InputValidator.validate_integer(n_gates, 0, "n_gates")
    rng = np.random.default_rng(InputValidator.validate_seed(seed))
    first = rng.integers(0, n_qubits, size=n_gates)
    second = rng.integers(0, n_qubits - 1, size=n_gates)
    second = second + (second >= first)
    return [(int(min(a, b)), int(max(a, b))) for a, b in zip(first, second)]


def cut_weight(weights: np.ndarray, labels: np.ndarray) -> float:
    """Total weight of pairs with different labels."""
    different = labels[:, None] != labels[None, :]
    return float(weights[different].sum() / 2.0)


# ---------------------------------------------------------------- bisection


def _grown_side(weights: np.ndarray, size_a: int, rng: np.random.Generator) -> np.ndarray:
    """Initial side A: the first ``size_a`` nodes of a breadth-first order from random seeds."""
    count = weights.shape[0]
    seen = np.zeros(count, dtype=bool)
    order: List[int] = []
    for seed_node in rng.permutation(count):
        if seen[seed_node]:
            continue
        seen[seed_node] = True
        queue = deque([int(seed_node)])
        while queue:
            node = queue.popleft()
            order.append(node)
            for neighbor in np.flatnonzero(weights[node] > 0):
                if not seen[neighbor]:
                    seen[neighbor] = True
                    queue.append(int(neighbor))
        if len(order) >= size_a:
            break
    side = np.full(count, -1.0)
    side[order[:size_a]] = 1.0
    return side


def _swap(weights: np.ndarray, side: np.ndarray, pull: np.ndarray, a: int, b: int) -> None:
    pull -= 2.0 * weights[:, a] * side[a]
    pull -= 2.0 * weights[:, b] * side[b]
    side[a] = -side[a]
    side[b] = -side[b]


def _kl_pass(weights: np.ndarray, side: np.ndarray, pull: np.ndarray) -> bool:
    """
    One Kernighan-Lin pass with tentative swaps, rolled back to the best prefix.

    ``side`` holds +1/-1 per node and ``pull`` = weights @ side; the gain
    vector D = -side * pull is each node's external minus internal weight.
    """
    locked = np.zeros(len(side), dtype=bool)
    swaps: List[Tuple[int, int]] = []
    total = 0.0
    best_total = 0.0
    best_length = 0
    while True:
        free_a = np.flatnonzero((side > 0) & ~locked)
        free_b = np.flatnonzero((side < 0) & ~locked)
        if not free_a.size or not free_b.size:
            break
        gains = -side * pull
        top_a = free_a[np.argsort(-gains[free_a], kind="stable")[:CANDIDATES_PER_SIDE]]
        top_b = free_b[np.argsort(-gains[free_b], kind="stable")[:CANDIDATES_PER_SIDE]]
        pair_gains = gains[top_a][:, None] + gains[top_b][None, :] - 2.0 * weights[np.ix_(top_a, top_b)]
        i, j = np.unravel_index(int(np.argmax(pair_gains)), pair_gains.shape)
        a, b = int(top_a[i]), int(top_b[j])
        total += float(pair_gains[i, j])
        _swap(weights, side, pull, a, b)
        locked[a] = locked[b] = True
        swaps.append((a, b))
        if total > best_total + GAIN_TOLERANCE:
            best_total, best_length = total, len(swaps)
        elif len(swaps) - best_length >= PASS_PATIENCE:
            break
    for a, b in reversed(swaps[best_length:]):
        _swap(weights, side, pull, a, b)
    return best_length > 0


def _settle(weights: np.ndarray, side: np.ndarray, pull: np.ndarray) -> None:
    """Apply best single swaps until none has positive gain."""
    while True:
        gains = -side * pull
        members_a = np.flatnonzero(side > 0)
        members_b = np.flatnonzero(side < 0)
        if not members_a.size or not members_b.size:
            return
        members_a = members_a[gains[members_a] + gains[members_b].max() > GAIN_TOLERANCE]
        members_b = members_b[gains[members_b] + gains[side > 0].max() > GAIN_TOLERANCE]
        if not members_a.size or not members_b.size:
            return
        pair_gains = gains[members_a][:, None] + gains[members_b][None, :] \
            - 2.0 * weights[np.ix_(members_a, members_b)]
        i, j = np.unravel_index(int(np.argmax(pair_gains)), pair_gains.shape)
        if pair_gains[i, j] <= GAIN_TOLERANCE:
            return
        _swap(weights, side, pull, int(members_a[i]), int(members_b[j]))


def _bisect(weights: np.ndarray, size_a: int, rng: np.random.Generator, restarts: int) -> np.ndarray:
    """Boolean mask of side A with exactly ``size_a`` members and a locally minimal cut."""
    count = weights.shape[0]
    if size_a in (0, count):
        return np.full(count, size_a == count)
    best_side: Optional[np.ndarray] = None
    best_cut = np.inf
    for _ in range(restarts):
        side = _grown_side(weights, size_a, rng)
        pull = weights @ side
        for _ in range(MAX_PASSES):
            if not _kl_pass(weights, side, pull):
                break
        _settle(weights, side, pull)
        cut = float((weights.sum() - side @ pull) / 4.0)
        if cut < best_cut - GAIN_TOLERANCE:
            best_cut, best_side = cut, side.copy()
    return best_side > 0


def _split(weights: np.ndarray, nodes: np.ndarray, sizes: Sequence[int], first_label: int,
           labels: np.ndarray, rng: np.random.Generator, restarts: int) -> None:
    if len(sizes) == 1:
        labels[nodes] = first_label
        return
    half = (len(sizes) + 1) // 2
    left, right = sizes[:half], sizes[half:]
    mask = _bisect(weights[np.ix_(nodes, nodes)], sum(left), rng, restarts)
    _split(weights, nodes[mask], left, first_label, labels, rng, restarts)
    _split(weights, nodes[~mask], right, first_label + half, labels, rng, restarts)


def _partition(weights: np.ndarray, sizes: Sequence[int], rng: np.random.Generator, restarts: int) -> np.ndarray:
    if sum(sizes) != weights.shape[0] or any(size < 0 for size in sizes) or not sizes:
        raise PlacementError("partition", f"target sizes {tuple(sizes)} do not cover {weights.shape[0]} nodes")
    labels = np.zeros(weights.shape[0], dtype=np.int64)
    _split(weights, np.arange(weights.shape[0]), list(sizes), 0, labels, rng, restarts)
    return labels


def balanced_partition(
    weights: np.ndarray,
    sizes: Sequence[int],
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> np.ndarray:
    """
    Split nodes into ``len(sizes)`` parts of exactly the given sizes with a small cut.

    Parts are peeled off by recursive bisection (⌈m/2⌉ parts against ⌊m/2⌋),
    each bisection grown from random breadth-first seeds and refined by
    Kernighan-Lin passes; the cut is locally minimal under single swaps.

    Args:
        weights (np.ndarray): Symmetric nonnegative weight matrix
        sizes (Sequence[int]): Target part sizes summing to the node count
        seed (int): Random seed
        restarts (int): Independent initial bisections; the smallest cut wins

    Returns:
        np.ndarray: Part label 0..len(sizes)-1 per node

    Raises:
        PlacementError: If the sizes do not cover the nodes exactly
    """
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ValidationError(weights.shape, "Weight matrix must be square")
    rng = np.random.default_rng(InputValidator.validate_seed(seed))
    restarts = InputValidator.validate_integer(restarts, 1, "restarts")
    return _partition(weights, sizes, rng, restarts)


# ---------------------------------------------------------------- placement


def _machine_shape(machine: HierarchySpec) -> Tuple[int, int]:
    """(n, k) of a K_n hierarchy machine."""
    if machine.truncated:
        raise PlacementError("machine", "truncated hierarchies are not supported")
    n = machine.bases[0].order
    for base in machine.bases:
        if base.order != n or base.number_of_edges != n * (n - 1) // 2:
            raise PlacementError("machine", "every base graph must be the same complete graph K_n")
    return n, machine.depth


@lru_cache(maxsize=8)
def _hop_distances(machine: Graph) -> np.ndarray:
    distances = shortest_paths(machine, Metric.HOP)
    distances.setflags(write=False)
    return distances


def placement_cost(circuit: CircuitGraph, machine: Graph, mapping: Sequence[int]) -> int:
    """
    Σ w(u, v) · hop distance between the machine nodes of u and v.

    Raises:
        PlacementError: If the mapping is not total and injective into the machine
    """
    mapping = np.asarray(mapping, dtype=np.int64)
    if mapping.shape != (circuit.qubits,):
        raise PlacementError("cost", f"mapping covers {mapping.size} of {circuit.qubits} qubits")
    if mapping.size and (mapping.min() < 0 or mapping.max() >= machine.order):
        raise PlacementError("cost", "mapping targets a node outside the machine")
    if len(np.unique(mapping)) != mapping.size:
        raise PlacementError("cost", "mapping sends two qubits to the same node")
    if not circuit.weights:
        return 0
    distances = _hop_distances(machine)
    pairs = np.array(list(circuit.weights.keys()), dtype=np.int64)
    counts = np.array(list(circuit.weights.values()), dtype=float)
    return int(round(float((counts * distances[mapping[pairs[:, 0]], mapping[pairs[:, 1]]]).sum())))


def _check_fits(circuit: CircuitGraph, machine: HierarchySpec) -> None:
    if circuit.qubits > machine.order:
        raise PlacementError("fit", f"{circuit.qubits} qubits exceed the {machine.order}-node machine")


def naive_placement(circuit: CircuitGraph, machine: HierarchySpec) -> Placement:
    """Identity layout: qubit i on machine node i."""
    _check_fits(circuit, machine)
    mapping = tuple(range(circuit.qubits))
    cost = placement_cost(circuit, build_hierarchy(machine), mapping)
    return Placement(mapping, cost, cost, machine, None, Strategy.NAIVE)


def _partition_digits(weights: np.ndarray, n: int, depth: int, rng: np.random.Generator,
                      restarts: int) -> np.ndarray:
    digits = np.zeros((weights.shape[0], depth), dtype=np.int64)
    pending = [(np.arange(weights.shape[0]), 0)]
    while pending:
        nodes, position = pending.pop(0)
        if position == depth:
            continue
        labels = _partition(weights[np.ix_(nodes, nodes)], [len(nodes) // n] * n, rng, restarts)
        for part in range(n):
            members = nodes[labels == part]
            digits[members, position] = part
            pending.append((members, position + 1))
    return digits


def _rotate(weights: np.ndarray, digits: np.ndarray) -> None:
    """
    Bottom-up rotation: in each module the sub-module with the most weight
    leaving the module takes digit 0. Ties go to the sub-module holding the
    smallest qubit index. The top position is never rotated.
    """
    depth = digits.shape[1]
    for position in range(depth - 1, 0, -1):
        prefixes = {}
        for qubit, prefix in enumerate(map(tuple, digits[:, :position])):
            prefixes.setdefault(prefix, []).append(qubit)
        for members in prefixes.values():
            members = np.asarray(members)
            outside = np.ones(weights.shape[0], dtype=bool)
            outside[members] = False
            external = weights[np.ix_(members, outside)].sum(axis=1)
            values = digits[members, position]
            best_value, best_key = 0, None
            for value in np.unique(values):
                part = values == value
                key = (-float(external[part].sum()), int(members[part].min()))
                if best_key is None or key < best_key:
                    best_value, best_key = int(value), key
            if best_value != 0:
                chosen = values == best_value
                at_root = values == 0
                digits[members[chosen], position] = 0
                digits[members[at_root], position] = best_value


def partition_and_rotate(
    circuit: CircuitGraph,
    machine: HierarchySpec,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> Placement:
    """
    Raw partition-and-rotate layout, without the naive fallback.

    Raises:
        PlacementError: If the circuit does not fit or the machine is not a K_n hierarchy
    """
    n, depth = _machine_shape(machine)
    _check_fits(circuit, machine)
    seed = InputValidator.validate_seed(seed)
    restarts = InputValidator.validate_integer(restarts, 1, "restarts")
    rng = np.random.default_rng(seed)

    weights = circuit.matrix(machine.order)
    digits = _partition_digits(weights, n, depth, rng, restarts)
    _rotate(weights, digits)
    places = digits @ (n ** np.arange(depth - 1, -1, -1))
    mapping = tuple(int(node) for node in places[: circuit.qubits])

    machine_graph = build_hierarchy(machine)
    cost = placement_cost(circuit, machine_graph, mapping)
    naive_cost = placement_cost(circuit, machine_graph, range(circuit.qubits))
    return Placement(mapping, cost, naive_cost, machine, seed, Strategy.PARTITION_ROTATE)


def place(
    circuit: CircuitGraph,
    machine: HierarchySpec,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> Placement:
    """
    Partition-and-rotate placement, falling back to the naive layout when that is cheaper.

    Returns:
        Placement: The cheaper layout; ``strategy`` records which one won
    """
    placed = partition_and_rotate(circuit, machine, seed, restarts)
    if placed.cost <= placed.naive_cost:
        result = placed
    else:
        result = Placement(tuple(range(circuit.qubits)), placed.naive_cost, placed.naive_cost,
                           machine, placed.seed, Strategy.NAIVE)
    logger.info(
        "placed %d qubits / %d gates on %s: cost %d (naive %d, %s)",
        circuit.qubits, circuit.gate_count, machine.label, result.cost, result.naive_cost, result.strategy.value,
    )
    return result


def bottom_roots(placement: Placement) -> Dict[int, int]:
    """Machine node index of each bottom module's root mapped to the qubit placed there."""
    n = placement.machine_spec.bases[0].order
    return {node: qubit for qubit, node in enumerate(placement.mapping) if node % n == 0}
