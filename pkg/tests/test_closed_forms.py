"""
Tests for hierarchy closed forms, checked against invariants measured on built graphs.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from app.closed_forms import (
    BaseInvariants,
    Regime,
    degree_diameter_checks,
    embedding_alpha,
    formulas_for_graph,
    hierarchy_formulas,
    kn_total_weight,
    kn_weighted_diameter,
    regime_exponents,
    truncated_capacity_ratio,
    truncated_node_count,
)
from app.exceptions import ValidationError
from app.metrics import invariants
from app.products import HierarchySpec, build_hierarchy
from app.topologies import standard_graph


def _slope(values, orders):
    """Log-log slope of the last segment."""
    return math.log(values[-1] / values[-2]) / math.log(orders[-1] / orders[-2])


class TestHierarchyFormulas:
    """Level recursions."""

    def test_two_level_triangle(self, k3):
        record = formulas_for_graph(k3, 2, (1, 1))
        assert record.diameter == 3
        assert record.max_degree == 4
        assert record.total_edge_weight == 12
        assert record.regime is Regime.UNIFORM

    def test_weighted_diameter(self, k3):
        record = formulas_for_graph(k3, 2, (1, 2))
        assert record.weighted_diameter == 4
        assert record.total_edge_weight == 15
        assert record.regime is Regime.FAT

    def test_single_level_is_the_base(self, c5):
        base = BaseInvariants.from_graph(c5)
        record = hierarchy_formulas(base, 1, (1,))
        assert record.diameter == base.diameter
        assert record.root_eccentricity == base.root_eccentricity
        assert record.weighted_diameter == base.weighted_diameter
        assert record.max_degree == base.max_degree
        assert record.total_edge_weight == base.total_edge_weight
        assert record.regime is None

    def test_results_are_exact_fractions(self, k3):
        record = formulas_for_graph(k3, 3, (1, Fraction(1, 3), Fraction(1, 9)))
        assert record.weighted_diameter == Fraction(2) * (1 + Fraction(1, 3)) + Fraction(1, 9)
        assert record.regime is Regime.SKINNY

    def test_non_geometric_weights_have_no_regime(self, k3):
        assert formulas_for_graph(k3, 3, (1, 2, 3)).regime is None

    def test_weight_count_checked(self, k3):
        with pytest.raises(ValidationError, match="One level weight per level"):
            formulas_for_graph(k3, 3, (1, 2))

    def test_bottom_weight_checked(self, k3):
        with pytest.raises(ValidationError, match="Bottom level weight"):
            formulas_for_graph(k3, 2, (2, 2))

    def test_to_dict(self, k3):
        data = formulas_for_graph(k3, 2, (1, 2)).to_dict()
        assert data["weighted_diameter"] == 4.0
        assert data["regime"] == "1<alpha<n"


class TestOracleEquivalence:
    """Formulas agree with invariants of the built hierarchies."""

    @pytest.mark.parametrize("kind, n", [("complete", 3), ("complete", 4), ("cycle", 5), ("star", 4)])
    @pytest.mark.parametrize("alpha", [1.0, 0.5, 2.0])
    def test_measured_invariants(self, kind, n, alpha):
        base = standard_graph(kind, n)
        for depth in range(1, 5):
            spec = HierarchySpec.uniform(base, depth, alpha)
            measured = invariants(build_hierarchy(spec))
            predicted = formulas_for_graph(base, depth, spec.alphas)
            assert measured.diameter == predicted.diameter
            assert measured.eccentricity_of_root == predicted.root_eccentricity
            assert measured.max_degree == predicted.max_degree
            assert measured.weighted_diameter == pytest.approx(float(predicted.weighted_diameter), abs=1e-12)
            assert measured.weighted_eccentricity_of_root == pytest.approx(
                float(predicted.weighted_root_eccentricity), abs=1e-12
            )
            assert measured.total_edge_weight == pytest.approx(float(predicted.total_edge_weight), abs=1e-12)

    def test_mixed_level_weights(self, s4):
        alphas = (1.0, 0.25, 3.0)
        measured = invariants(build_hierarchy(HierarchySpec((s4,) * 3, alphas)))
        predicted = formulas_for_graph(s4, 3, alphas)
        assert measured.weighted_diameter == pytest.approx(float(predicted.weighted_diameter))


class TestCompleteGraphForms:
    """Closed forms for K_n hierarchies."""

    def test_three_two_two(self):
        assert kn_weighted_diameter(3, 2, 2) == 4
        assert kn_total_weight(3, 2, 2) == 15

    @pytest.mark.parametrize("n, depth", [(3, 1), (3, 4), (5, 3)])
    def test_uniform_branch(self, n, depth):
        assert kn_weighted_diameter(n, depth, 1) == 2 * depth - 1

    def test_critical_branch(self):
        edges = kn_total_weight(3, 3, 3)
        assert edges == 3 * 3 * 9
        measured = build_hierarchy(HierarchySpec.uniform(standard_graph("complete", 3), 3, 3.0))
        assert measured.total_edge_weight == pytest.approx(float(edges))

    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(3, 2), 2])
    def test_agree_with_recursion(self, n, alpha):
        base = standard_graph("complete", n)
        for depth in range(1, 6):
            record = formulas_for_graph(base, depth, [alpha ** i for i in range(depth)])
            assert kn_weighted_diameter(n, depth, alpha) == record.weighted_diameter
            assert kn_total_weight(n, depth, alpha) == record.total_edge_weight

    def test_skinny_diameter_stays_bounded(self):
        alpha = 0.5
        for depth in range(1, 40):
            assert kn_weighted_diameter(3, depth, alpha) <= 2 / (1 - alpha) + 1

    @pytest.mark.parametrize("alpha", [2, 3, 4])
    def test_weighted_diameter_slope(self, alpha):
        orders = [3 ** 5, 3 ** 6]
        values = [float(kn_weighted_diameter(3, k, alpha)) for k in (5, 6)]
        assert _slope(values, orders) == pytest.approx(regime_exponents(3, alpha)[0], abs=0.05)

    @pytest.mark.parametrize("alpha", [0.5, 1.5, 2])
    def test_total_weight_slope(self, alpha):
        orders = [3 ** 5, 3 ** 6]
        values = [float(kn_total_weight(3, k, alpha)) for k in (5, 6)]
        assert _slope(values, orders) == pytest.approx(regime_exponents(3, alpha)[1], abs=0.05)

    @pytest.mark.slow
    def test_measured_weighted_diameter_slope(self, k3):
        orders, values = [], []
        for depth in (5, 6):
            graph = build_hierarchy(HierarchySpec.uniform(k3, depth, 2.0))
            orders.append(graph.order)
            values.append(invariants(graph).weighted_diameter)
        assert values == [46.0, 94.0]
        assert _slope(values, orders) == pytest.approx(math.log(2, 3), abs=0.05)


class TestRegimes:
    """Regime tags and exponents."""

    @pytest.mark.parametrize("alpha, regime", [
        (0.5, Regime.SKINNY),
        (1, Regime.UNIFORM),
        (2, Regime.FAT),
        (3, Regime.CRITICAL),
        (4, Regime.SUPERCRITICAL),
    ])
    def test_classify(self, alpha, regime):
        assert Regime.classify(3, alpha) is regime

    def test_exponents(self):
        assert regime_exponents(3, 0.5) == (0.0, 1.0)
        assert regime_exponents(3, 3) == pytest.approx((1.0, 1.0))
        assert regime_exponents(4, 8) == pytest.approx((1.5, 1.5))

    def test_embedding_alpha(self):
        assert embedding_alpha(4, 2) == pytest.approx(2.0)
        assert embedding_alpha(8, 3) == pytest.approx(2.0)


class TestTruncatedCounts:
    """Node counts of truncated hierarchies."""

    @pytest.mark.parametrize("n, depth, expected", [(3, 2, 7), (4, 3, 40), (2, 5, 6), (2, 0, 1)])
    def test_counts(self, n, depth, expected):
        assert truncated_node_count(n, depth) == expected

    def test_count_matches_built_graph(self, k4):
        assert build_hierarchy(HierarchySpec.uniform(k4, 3, truncated=True)).order == truncated_node_count(4, 3)


class TestDegreeDiameter:
    """Moore bound and tree-width capacity."""

    def test_petersen_value(self):
        assert degree_diameter_checks(3, 2).moore_bound == 10

    def test_degree_two_rejected(self):
        with pytest.raises(ValidationError, match="maximum degree >= 3"):
            degree_diameter_checks(2, 3)

    def test_even_diameter_rejected_with_treewidth(self):
        with pytest.raises(ValidationError, match="odd diameter"):
            degree_diameter_checks(4, 2, treewidth=2)

    def test_capacity(self):
        bounds = degree_diameter_checks(4, 5, treewidth=2)
        assert bounds.treewidth_capacity == 18
        assert bounds.to_dict()["treewidth_capacity"] == 18.0

    @pytest.mark.parametrize("depth", range(2, 7))
    def test_truncated_triangle_ratio(self, depth):
        assert truncated_capacity_ratio(3, depth) == Fraction(3, 2)

    def test_fleet_respects_moore_bound(self, fleet):
        for graph in fleet:
            record = invariants(graph)
            if record.max_degree >= 3:
                assert record.order <= degree_diameter_checks(record.max_degree, record.diameter).moore_bound

    def test_truncated_hierarchy_shape(self, k3):
        for depth in range(2, 5):
            record = invariants(build_hierarchy(HierarchySpec.uniform(k3, depth, truncated=True)))
            assert record.max_degree == 4
            assert record.diameter == 2 * depth - 1
            assert np.isfinite(float(degree_diameter_checks(4, record.diameter, treewidth=2).treewidth_capacity))
