"""
Tests for deterministic GHZ times and the probabilistic spreading simulator.
"""

import numpy as np
import pytest

from app.exceptions import DisconnectedGraphError, SimulationError, ValidationError
from app.ghz import (
    ProbGraph,
    best_case,
    deterministic_ghz_time,
    ghz_trials,
    StartChoice,
    graph_center,
    graph_periphery,
    probability_weights,
    simulate_ghz,
    trace,
    worst_case,
)
from app.graph import build_graph, unit_graph
from app.metrics import eccentricity
from app.products import HierarchySpec, build_hierarchy
from app.topologies import standard_graph


def _grid_mean(side, trials=200, seed=0):
    grid = standard_graph("grid", 2, side)
    return ghz_trials(ProbGraph.uniform(grid, 0.1), start=grid.root, trials=trials, seed=seed)


class TestDeterministicTimes:
    """Weighted eccentricities as GHZ times."""

    def test_path_from_end(self):
        assert deterministic_ghz_time(standard_graph("path", 4)) == 3.0

    def test_two_level_triangle(self, k3, k3_squared):
        assert worst_case(k3_squared) == 3.0
        weighted = build_hierarchy(HierarchySpec.uniform(k3, 2, 2.0))
        assert worst_case(weighted) == 4.0

    def test_best_and_worst_within_factor_two(self, fleet):
        for graph in fleet:
            best, worst = best_case(graph), worst_case(graph)
            assert best <= worst <= 2 * best

    def test_center_of_path(self):
        assert graph_center(standard_graph("path", 5)) == 2
        # ties go to the smallest index
        assert graph_center(standard_graph("path", 4)) == 1

    def test_periphery_of_path(self):
        assert graph_periphery(standard_graph("path", 5)) == 0
        assert graph_periphery(standard_graph("star", 4)) == 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            deterministic_ghz_time(unit_graph(3, [(0, 1)]))


class TestProbabilityWeights:
    """Level-dependent success probabilities."""

    def test_levels_scale_geometrically(self, k3):
        prob = probability_weights(HierarchySpec.uniform(k3, 2), 0.1, 0.5)
        assert prob.graph.weight(0, 1) == pytest.approx(0.1)
        assert prob.graph.weight(0, 3) == pytest.approx(0.05)
        assert prob.p0 == 0.1 and prob.alpha == 0.5

    def test_alpha_defaults_to_spec_weight(self, k3):
        prob = probability_weights(HierarchySpec.uniform(k3, 3, 0.8), 0.1)
        assert prob.graph.weight(0, 9) == pytest.approx(0.1 * 0.8 ** 2)

    def test_uniform_when_alpha_is_one(self, k3):
        prob = probability_weights(HierarchySpec((k3, k3), (1.0, 5.0)), 0.3, 1.0)
        assert {p for _, _, p in prob.graph.edges()} == {0.3}

    def test_certain_edges_reduce_to_hops(self, k3_squared):
        prob = probability_weights(HierarchySpec.uniform(standard_graph("complete", 3), 2), 1.0, 1.0)
        assert simulate_ghz(prob, start=0, seed=5) == eccentricity(k3_squared, 0)

    def test_probability_above_one_rejected(self, k3):
        with pytest.raises(ValidationError, match="top-level probability"):
            probability_weights(HierarchySpec.uniform(k3, 2), 0.5, 3.0)

    @pytest.mark.parametrize("p0", [0, 1.5, -0.1])
    def test_bad_p0_rejected(self, k3, p0):
        with pytest.raises(ValidationError):
            probability_weights(HierarchySpec.uniform(k3, 2), p0, 0.5)


class TestProbGraph:
    """Validation of probability graphs."""

    def test_edge_probability_above_one(self):
        with pytest.raises(ValidationError, match="probability"):
            ProbGraph(build_graph(2, [(0, 1, 2.0)]), 0.5)

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            ProbGraph.uniform(unit_graph(3, [(0, 1)]), 0.5)

    def test_time_graph(self):
        prob = ProbGraph.uniform(standard_graph("path", 3), 0.25)
        assert prob.time_graph().total_edge_weight == pytest.approx(8.0)


class TestSimulation:
    """Single runs and traces."""

    def test_certain_edges_take_eccentricity(self, fleet):
        for graph in fleet:
            prob = ProbGraph.uniform(graph, 1.0)
            assert simulate_ghz(prob, seed=1) == eccentricity(graph)

    def test_seed_determinism(self, k3_squared):
        prob = ProbGraph.uniform(k3_squared, 0.3)
        first = [simulate_ghz(prob, seed=s) for s in range(20)]
        second = [simulate_ghz(prob, seed=s) for s in range(20)]
        assert first == second
        assert len(set(first)) > 1

    def test_seed_required(self, k3):
        with pytest.raises(ValidationError, match="seed is required"):
            simulate_ghz(ProbGraph.uniform(k3, 0.5), seed=None)

    def test_trace_is_monotone(self, k3_squared):
        prob = ProbGraph.uniform(k3_squared, 0.4)
        sizes = trace(prob, seed=3)
        assert sizes[0] == 1
        assert sizes[-1] == 9
        assert all(b >= a for a, b in zip(sizes, sizes[1:]))
        assert len(sizes) - 1 == simulate_ghz(prob, seed=3)

    def test_step_cap(self, k2):
        prob = ProbGraph.uniform(k2, 1e-9)
        with pytest.raises(SimulationError, match="no completion"):
            simulate_ghz(prob, seed=0, step_cap=10)

    def test_single_edge_is_geometric(self, k2):
        stats = ghz_trials(ProbGraph.uniform(k2, 0.5), start=0, trials=10_000, seed=0)
        assert stats.mean == pytest.approx(2.0, abs=0.05)
        assert stats.prediction == 2.0


class TestTrials:
    """Trial aggregation, predictions and bounds."""

    def test_single_trial(self, k3_squared):
        prob = ProbGraph.uniform(k3_squared, 0.5)
        stats = ghz_trials(prob, trials=1, seed=7)
        assert stats.std == 0.0
        assert stats.mean == stats.min == stats.max == simulate_ghz(prob, stats.start, seed=7)

    def test_start_defaults_to_periphery(self, k3):
        prob = probability_weights(HierarchySpec.uniform(k3, 2), 0.2, 0.5)
        stats = ghz_trials(prob, trials=3, seed=0)
        assert stats.start == graph_periphery(prob.time_graph())
        assert stats.prediction == pytest.approx(worst_case(prob.time_graph()))
        assert stats.prediction == pytest.approx(20.0)
        assert stats.bound_hi == stats.prediction
        assert stats.bound_lo == pytest.approx(0.2 * stats.prediction)

    def test_center_start_choice(self, k3):
        prob = probability_weights(HierarchySpec.uniform(k3, 2), 0.2, 0.5)
        stats = ghz_trials(prob, trials=3, seed=0, start_choice="center")
        assert stats.start == graph_center(prob.time_graph())
        assert stats.prediction == pytest.approx(best_case(prob.time_graph()))
        assert ghz_trials(prob, start=4, trials=3, seed=0, start_choice=StartChoice.CENTER).start == 4

    def test_unknown_start_choice(self, k3):
        with pytest.raises(ValidationError, match="Unknown start choice"):
            ghz_trials(ProbGraph.uniform(k3, 0.5), trials=1, seed=0, start_choice="middle")

    def test_parallel_matches_serial(self, k3_squared):
        prob = ProbGraph.uniform(k3_squared, 0.3)
        serial = ghz_trials(prob, trials=12, seed=4)
        parallel = ghz_trials(prob, trials=12, seed=4, jobs=2)
        assert serial.outcomes == parallel.outcomes

    def test_to_dict_omits_outcomes(self, k3):
        data = ghz_trials(ProbGraph.uniform(k3, 0.5), trials=5, seed=0).to_dict()
        assert "outcomes" not in data
        assert data["generator"].startswith("numpy")
        assert data["trials"] == 5

    def test_grid_inside_sandwich(self):
        stats = _grid_mean(8)
        assert stats.bound_lo == pytest.approx(14.0)
        assert stats.bound_hi == pytest.approx(140.0)
        assert stats.within_bounds()


@pytest.mark.slow
class TestHierarchyStatistics:
    """Monte Carlo means against the graph-theoretic prediction."""

    @pytest.mark.parametrize("alpha", [0.5, 0.7, 0.9])
    @pytest.mark.parametrize("depth", [2, 3, 4, 5])
    def test_prediction_and_sandwich(self, k3, alpha, depth):
        prob = probability_weights(HierarchySpec.uniform(k3, depth, alpha), 0.1)
        stats = ghz_trials(prob, trials=200, seed=0)
        assert stats.prediction == pytest.approx(worst_case(prob.time_graph()))
        assert stats.relative_error() <= 0.2
        assert stats.mean >= stats.bound_lo
        if alpha == 0.9 and depth >= 3:
            # mean of a maximum over near-critical paths; a few percent above δ_T
            assert stats.mean <= 1.1 * stats.bound_hi
        else:
            assert stats.within_bounds()

    def test_three_levels_at_point_eight(self, k3):
        prob = probability_weights(HierarchySpec.uniform(k3, 3, 0.8), 0.1)
        stats = ghz_trials(prob, trials=200, seed=11)
        assert stats.relative_error() <= 0.2

    def test_grid_exponent(self):
        orders, means = [], []
        for side in (4, 8, 16):
            stats = _grid_mean(side)
            assert stats.within_bounds()
            orders.append(side * side)
            means.append(stats.mean)
        slope = np.polyfit(np.log(orders), np.log(means), 1)[0]
        assert slope == pytest.approx(0.5, abs=0.1)

    def test_crossover_against_grid(self, k3):
        orders, means = [], []
        for side in (4, 8, 16):
            orders.append(side * side)
            means.append(_grid_mean(side).mean)
        slope, intercept = np.polyfit(np.log(orders), np.log(means), 1)
        grid_at_243 = float(np.exp(intercept + slope * np.log(243)))

        def hierarchy_mean(alpha):
            prob = probability_weights(HierarchySpec.uniform(k3, 5, alpha), 0.1)
            return ghz_trials(prob, trials=200, seed=3, start_choice=StartChoice.CENTER).mean

        assert hierarchy_mean(0.7) < grid_at_243
        assert hierarchy_mean(0.5) > grid_at_243
