"""
Tests for exact and heuristic Cheeger constants.
"""

import pytest

from app.cheeger import (
    CheegerMode,
    cheeger,
    cut_ratio,
    cut_weight,
    exact_cheeger,
    fiedler_sweep,
    heuristic_cheeger,
    module_cut,
)
from app.exceptions import DisconnectedGraphError, GraphError, ValidationError
from app.graph import build_graph, unit_graph
from app.topologies import standard_graph


class TestCuts:
    """Cut weights and ratios."""

    def test_cut_weight(self):
        graph = build_graph(3, [(0, 1, 2.0), (1, 2, 0.5)])
        assert cut_weight(graph, [0]) == 2.0
        assert cut_weight(graph, [0, 1]) == 0.5

    def test_cut_ratio_uses_smaller_side(self, c5):
        assert cut_ratio(c5, [0, 1]) == 1.0
        assert cut_ratio(c5, [0, 1, 2]) == 1.0

    def test_cut_ratio_rejects_trivial_sides(self, c5):
        with pytest.raises(ValidationError):
            cut_ratio(c5, [])
        with pytest.raises(ValidationError):
            cut_ratio(c5, range(5))


class TestExactCheeger:
    """Exhaustive enumeration."""

    @pytest.mark.parametrize("graph, expected", [
        (standard_graph("complete", 4), 2.0),
        (standard_graph("cycle", 6), 2 / 3),
        (standard_graph("path", 4), 0.5),
        (standard_graph("star", 5), 1.0),
    ])
    def test_small_graphs(self, graph, expected):
        result = exact_cheeger(graph)
        assert result.value == pytest.approx(expected)
        assert cut_ratio(graph, result.cut) == pytest.approx(expected)
        assert result.mode is CheegerMode.EXACT

    def test_weights_count(self):
        graph = build_graph(4, [(0, 1, 1.0), (1, 2, 0.1), (2, 3, 1.0)])
        result = exact_cheeger(graph)
        assert result.value == pytest.approx(0.05)
        assert set(result.cut) in ({0, 1}, {2, 3})

    def test_two_nodes(self, k2):
        assert exact_cheeger(k2).value == 1.0

    def test_order_limit(self):
        with pytest.raises(GraphError, match="heuristic mode"):
            exact_cheeger(standard_graph("cycle", 12), max_order=10)

    def test_single_node_rejected(self):
        with pytest.raises(GraphError):
            exact_cheeger(unit_graph(1, []))

    def test_high_block_walk(self):
        # 20 nodes exercises the Gray-code walk over the high block
        cycle = standard_graph("cycle", 20)
        assert exact_cheeger(cycle).value == pytest.approx(0.2)

    @pytest.mark.slow
    def test_cycle_of_cliques(self, small_world_graphs):
        assert exact_cheeger(small_world_graphs["C7 ⊓ K4"]).value == pytest.approx(1 / 6)

    @pytest.mark.slow
    def test_clique_of_cycles(self, small_world_graphs):
        assert exact_cheeger(small_world_graphs["K7 ⊓ C4"]).value == pytest.approx(2 / 3)


class TestHeuristicCheeger:
    """Fiedler sweeps and module cuts."""

    @pytest.mark.parametrize("label, expected", [
        ("C7 ⊓ K4", 1 / 6),
        ("K7 ⊓ C4", 1.0),
        ("C13 ⊓ K5", 2 / 30),
        ("K13 ⊓ C5", 1.4),
    ])
    def test_module_cuts(self, small_world_graphs, label, expected):
        value, nodes = module_cut(small_world_graphs[label])
        assert value == pytest.approx(expected)
        assert cut_ratio(small_world_graphs[label], nodes) == pytest.approx(expected)

    def test_heuristic_never_above_module_cut(self, small_world_graphs):
        for graph in small_world_graphs.values():
            assert heuristic_cheeger(graph).value <= module_cut(graph)[0] + 1e-12

    def test_heuristic_bounds_exact_from_above(self, fleet):
        for graph in fleet:
            if graph.order <= 16:
                assert heuristic_cheeger(graph).value >= exact_cheeger(graph).value - 1e-12

    def test_module_cut_needs_levels(self, c5):
        assert module_cut(c5) is None

    def test_fiedler_sweep_on_path(self):
        value, cut = fiedler_sweep(standard_graph("path", 6))
        assert value == pytest.approx(1 / 3)
        assert cut in ((0, 1, 2), (3, 4, 5))


class TestCheegerEntryPoint:
    """Mode dispatch and connectivity checks."""

    def test_modes(self, small_world_graphs):
        graph = small_world_graphs["C13 ⊓ K5"]
        result = cheeger(graph, "heuristic")
        assert result.mode is CheegerMode.HEURISTIC
        assert result.to_dict()["mode"] == "heuristic"
        with pytest.raises(GraphError):
            cheeger(graph, "exact")

    def test_unknown_mode(self, k3):
        with pytest.raises(ValidationError, match="Unknown Cheeger mode"):
            cheeger(k3, "approximate")

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            cheeger(unit_graph(4, [(0, 1), (2, 3)]))
