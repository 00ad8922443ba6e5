"""
GHZ-state spreading on machine graphs.

Deterministic spreading takes the weighted eccentricity of the start node as
its completion time. Probabilistic spreading is a Monte Carlo process: each
step, every edge between the current GHZ set and the rest of the graph fires
independently with its success probability, and the newly reached nodes join
the set. The 1/p-weighted eccentricity of the start node predicts the mean;
by default runs start on the periphery, where that eccentricity is the
weighted diameter.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import partial
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .exceptions import SimulationError, ValidationError
from .graph import Graph, resolve_node
from .input_validators import InputValidator
from .metrics import Metric, eccentricities, eccentricity, require_connected
from .products import HierarchySpec, build_hierarchy

logger = logging.getLogger(__name__)

STEP_CAP = 1_000_000
GENERATOR = "numpy.random.default_rng(PCG64)"


class StartChoice(str, Enum):
    """Default start node for trials: largest or smallest 1/p-weighted eccentricity."""

    PERIPHERY = "periphery"
    CENTER = "center"

    @classmethod
    def parse(cls, value: Union[str, "StartChoice"]) -> "StartChoice":
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(value, "Unknown start choice", "'periphery' or 'center'")


@dataclass(frozen=True)
class ProbGraph:
    """
    Graph whose edge weights are per-step success probabilities in (0, 1].

    ``p0`` is the bottom-level probability used by the sandwich bound and
    ``alpha`` the per-level probability ratio it was built with.
    """

    graph: Graph
    p0: float
    alpha: float = 1.0

    def __post_init__(self):
        require_connected(self.graph, "probabilistic spreading")
        for i, j, p in self.graph.edges():
            if not 0 < p <= 1:
                raise ValidationError(p, f"edge ({i}, {j}) probability must lie in (0, 1]", "0 < p <= 1")
        object.__setattr__(self, "p0", InputValidator.validate_probability(self.p0, "p0"))

    @classmethod
    def uniform(cls, graph: Graph, p0: float) -> "ProbGraph":
        """Every edge succeeds with probability ``p0``."""
        p0 = InputValidator.validate_probability(p0, "p0")
        return cls(graph.with_weights({(i, j): p0 for i, j, _ in graph.edges()}), p0)

    @property
    def order(self) -> int:
        return self.graph.order

    def time_graph(self) -> Graph:
        """Same edges with expected waiting times 1/p as weights."""
        return self.graph.with_weights({(i, j): 1.0 / p for i, j, p in self.graph.edges()})


@dataclass(frozen=True)
class TrialStats:
    """Aggregate of independent spreading trials from one start node."""

    trials: int
    mean: float
    std: float
    min: int
    max: int
    seed: int
    start: int
    prediction: float
    bound_lo: float
    bound_hi: float
    generator: str = GENERATOR
    outcomes: Tuple[int, ...] = field(default=(), repr=False)

    @property
    def standard_error(self) -> float:
        return self.std / math.sqrt(self.trials)

    def within_bounds(self, sigmas: float = 2.0) -> bool:
        """Whether the sample mean lies in [bound_lo, bound_hi] allowing ``sigmas`` standard errors."""
        slack = sigmas * self.standard_error
        return self.bound_lo - slack <= self.mean <= self.bound_hi + slack

    def relative_error(self) -> float:
        return abs(self.mean - self.prediction) / self.prediction

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data.pop("outcomes")
        return data


def deterministic_ghz_time(graph: Graph, start: Optional[int] = None) -> float:
    """
    Completion time of CNOT spreading from ``start`` under gate-time weights.

    Raises:
        DisconnectedGraphError: If some node cannot be reached
    """
    require_connected(graph, "ghz")
    return eccentricity(graph, resolve_node(graph, start), Metric.WEIGHT)


def worst_case(graph: Graph) -> float:
    """Worst start node: the weighted diameter."""
    require_connected(graph, "ghz")
    return float(eccentricities(graph, Metric.WEIGHT).max())


def best_case(graph: Graph) -> float:
    """Best start node: the weighted radius."""
    require_connected(graph, "ghz")
    return float(eccentricities(graph, Metric.WEIGHT).min())


def graph_center(graph: Graph, metric: Metric = Metric.WEIGHT) -> int:
    """Node of minimum eccentricity; ties go to the smallest index."""
    require_connected(graph, "graph center")
    return int(np.argmin(eccentricities(graph, metric)))


def graph_periphery(graph: Graph, metric: Metric = Metric.WEIGHT) -> int:
    """Node of maximum eccentricity; ties go to the smallest index."""
    require_connected(graph, "graph periphery")
    return int(np.argmax(eccentricities(graph, metric)))


def probability_weights(spec: HierarchySpec, p0: float, alpha: Optional[float] = None) -> ProbGraph:
    """
    Hierarchy whose level-i edges succeed with probability p0·α^{i-1}.

    The base graphs are taken with unit weights. ``alpha`` defaults to the
    spec's geometric weight, or 1 when the spec has none.

    Raises:
        ValidationError: If a resulting probability falls outside (0, 1]
    """
    p0 = InputValidator.validate_probability(p0, "p0")
    if alpha is None:
        alpha = spec.geometric_alpha if spec.geometric_alpha is not None else 1.0
    alpha = InputValidator.validate_positive_weight(alpha, "alpha")
    InputValidator.validate_probability(p0 * alpha ** (spec.depth - 1), "top-level probability")

    unit_bases = [base.with_weights({(i, j): 1.0 for i, j, _ in base.edges()}) for base in spec.bases]
    levels = build_hierarchy(HierarchySpec.geometric(unit_bases, alpha, spec.truncated))
    probabilities = {(i, j): p0 * w for i, j, w in levels.edges()}
    return ProbGraph(levels.with_weights(probabilities), p0, alpha)


def _spread(prob: ProbGraph, start: int, rng: np.random.Generator, step_cap: int,
            sizes: Optional[List[int]] = None) -> int:
    u, v, p = prob.graph.edge_arrays
    members = np.zeros(prob.order, dtype=bool)
    members[start] = True
    joined = 1
    if sizes is not None:
        sizes.append(joined)
    steps = 0
    while joined < prob.order:
        steps += 1
        if steps > step_cap:
            raise SimulationError(f"no completion within {step_cap} steps ({joined}/{prob.order} joined)")
        frontier = np.flatnonzero(members[u] != members[v])
        fired = frontier[rng.random(frontier.size) < p[frontier]]
        if fired.size:
            reached = np.where(members[u[fired]], v[fired], u[fired])
            members[reached] = True
            joined = int(members.sum())
        if sizes is not None:
            sizes.append(joined)
    return steps


def simulate_ghz(prob: ProbGraph, start: Optional[int] = None, seed: int = 0, step_cap: int = STEP_CAP) -> int:
    """
    One spreading run; returns the first step at which every node has joined.

    Frontier edges are sampled in sorted edge order from a single generator
    seeded with ``seed``, so a run is reproducible bit for bit.

    Raises:
        SimulationError: If the step cap is exceeded
    """
    start = resolve_node(prob.graph, start)
    seed = InputValidator.validate_seed(seed)
    return _spread(prob, start, np.random.default_rng(seed), step_cap)


def trace(prob: ProbGraph, start: Optional[int] = None, seed: int = 0, step_cap: int = STEP_CAP) -> List[int]:
    """
    GHZ set size after each step, starting with 1 at step 0.

    Raises:
        SimulationError: If the set ever shrinks or the step cap is exceeded
    """
    start = resolve_node(prob.graph, start)
    sizes: List[int] = []
    _spread(prob, start, np.random.default_rng(InputValidator.validate_seed(seed)), step_cap, sizes)
    if any(later < earlier for earlier, later in zip(sizes, sizes[1:])):
        raise SimulationError("GHZ set shrank during spreading")
    return sizes


def _run_trial(prob: ProbGraph, start: int, step_cap: int, trial_seed: int) -> int:
    return _spread(prob, start, np.random.default_rng(trial_seed), step_cap)


def ghz_trials(
    prob: ProbGraph,
    start: Optional[int] = None,
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
    step_cap: int = STEP_CAP,
    start_choice: Union[str, StartChoice] = StartChoice.PERIPHERY,
) -> TrialStats:
    """
    Run independent spreading trials and compare them with the prediction.

    Trial t uses seed ``seed + t``. Without an explicit start, trials begin at
    the node picked by ``start_choice``: the periphery by default, so the
    prediction is the 1/p-weighted diameter δ_T. The prediction is always the
    1/p-weighted eccentricity of the start and the sandwich bound is
    [p0·prediction, prediction].

    Args:
        prob (ProbGraph): Probability-weighted graph
        start (int, optional): Start node; overrides ``start_choice``
        trials (int): Number of trials (>= 1)
        seed (int): Base seed
        jobs (int): Worker processes; results are ordered by trial index regardless
        start_choice (StartChoice): Default start rule

    Returns:
        TrialStats: Sample statistics with prediction and bounds
    """
    trials = InputValidator.validate_integer(trials, 1, "trials")
    seed = InputValidator.validate_seed(seed)
    jobs = InputValidator.validate_integer(jobs, 1, "jobs")
    times = prob.time_graph()
    if start is None:
        pick = graph_periphery if StartChoice.parse(start_choice) is StartChoice.PERIPHERY else graph_center
        start = pick(times)
    else:
        start = resolve_node(prob.graph, start)
    prediction = eccentricity(times, start, Metric.WEIGHT)

    run = partial(_run_trial, prob, start, step_cap)
    seeds = [seed + trial for trial in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(run, seeds, chunksize=max(1, trials // (4 * jobs))))
    else:
        outcomes = [run(trial_seed) for trial_seed in seeds]

    values = np.asarray(outcomes, dtype=float)
    stats = TrialStats(
        trials=trials,
        mean=float(values.mean()),
        std=float(values.std()),
        min=int(values.min()),
        max=int(values.max()),
        seed=seed,
        start=start,
        prediction=prediction,
        bound_lo=prob.p0 * prediction,
        bound_hi=prediction,
        outcomes=tuple(int(t) for t in outcomes),
    )
    logger.info(
        "ghz trials on %s: N=%d start=%d mean=%.2f prediction=%.2f",
        prob.graph.label or "graph", prob.order, start, stats.mean, prediction,
    )
    return stats
