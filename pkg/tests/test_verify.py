"""Tests for the counterexample-search and order-checking engine."""

import math

import numpy as np
import pytest

from relmetrics.errors import ConfigError, InvalidParameterError
from relmetrics.means import (
    ConstantWeight,
    PowerMeanPower,
    ProductWeight,
    stolarsky_weight,
)
from relmetrics.metrics import MetricKind, rho_pq
from relmetrics.verify import (
    FF_SUITE,
    SearchConfig,
    ViolationReport,
    classify_pq_region,
    convexity_check,
    lambda_sharpness,
    mi_check,
    plem_conditions,
    pq_frontier_distance,
    pq_is_metric,
    pq_threshold,
    strong_order_check,
    triangle_search_1d,
    triangle_search_nd,
    triangle_search_transformed,
)

FAST = SearchConfig(coarse_grid_points=40, refine_iterations=40, random_triples=4000)


def reverify_1d(report, p, q):
    """Recompute a power-mean witness through the public scalar distance."""
    lhs = rho_pq(p, q, [report.x], [report.y])
    rhs = rho_pq(p, q, [report.x], [report.z]) + rho_pq(p, q, [report.z], [report.y])
    return lhs, rhs


class TestSearchConfig:
    def test_defaults_valid(self):
        cfg = SearchConfig()
        assert cfg.coarse_grid_points == 64
        assert cfg.violation_tolerance == 1e-9

    def test_validation(self):
        with pytest.raises(ConfigError):
            SearchConfig(ranges=((0.0, 1.0),) * 3)
        with pytest.raises(ConfigError):
            SearchConfig(ranges=((2.0, 1.0),) * 3)
        with pytest.raises(ConfigError):
            SearchConfig(coarse_grid_points=2)
        with pytest.raises(ConfigError):
            SearchConfig(violation_tolerance=0.0)


class TestTriangleSearch1d:
    def test_li_case_is_metric(self):
        assert triangle_search_1d(PowerMeanPower(1.0, 1.0), FAST) is None

    def test_boundary_cases_are_metric(self):
        assert triangle_search_1d(PowerMeanPower(1.0 / 3.0, 1.0), FAST) is None
        assert triangle_search_1d(PowerMeanPower(0.5, 0.5), FAST) is None

    def test_low_order_violates(self):
        report = triangle_search_1d(PowerMeanPower(0.2, 1.0), FAST)
        assert report is not None
        lhs, rhs = reverify_1d(report, 0.2, 1.0)
        assert lhs - rhs > 1e-9 * max(lhs, rhs, 1.0)

    def test_high_exponent_violates_at_large_midpoint(self):
        report = triangle_search_1d(PowerMeanPower(1.0, 1.5), FAST)
        assert report is not None
        # the failure regime is an exploding midpoint
        assert abs(report.z) > max(abs(report.x), abs(report.y))

    def test_geometric_mean_weight_violates(self):
        assert triangle_search_1d(PowerMeanPower(0.0, 1.0), FAST) is not None

    def test_witness_soundness(self):
        for (p, q) in ((0.2, 1.0), (1.0, 1.5), (0.25, 0.9)):
            report = triangle_search_1d(PowerMeanPower(p, q), FAST)
            assert report is not None
            lhs, rhs = reverify_1d(report, p, q)
            assert lhs == pytest.approx(report.lhs, rel=1e-12)
            assert rhs == pytest.approx(report.rhs, rel=1e-12)
            assert report.margin == pytest.approx(lhs - rhs, rel=1e-9)

    def test_determinism(self):
        a = triangle_search_1d(PowerMeanPower(0.2, 1.0), FAST)
        b = triangle_search_1d(PowerMeanPower(0.2, 1.0), FAST)
        assert a.to_dict() == b.to_dict()

    def test_product_weight_routes_through_fallback(self):
        # exp is not MI, so signed random triples join the hunt
        M = ProductWeight(FF_SUITE["exp"], "exp")
        report = triangle_search_1d(M, FAST)
        assert report is not None


class TestTriangleSearchNd:
    def test_euclidean_clean(self):
        metric = lambda a, b: float(np.linalg.norm(a - b))
        assert triangle_search_nd(metric, 3, FAST) is None

    def test_finds_planted_violation(self):
        # a concave transform of Euclidean distance that over-shoots
        metric = lambda a, b: float(np.linalg.norm(a - b)) ** 2
        report = triangle_search_nd(metric, 2, FAST)
        assert report is not None
        lhs = metric(report.x, report.y)
        rhs = metric(report.x, report.z) + metric(report.z, report.y)
        assert lhs - rhs > 1e-9 * max(lhs, rhs, 1.0)

    def test_probes_are_used(self):
        metric = lambda a, b: float(np.linalg.norm(a - b)) ** 2
        probes = [(np.array([0.0, 0.0]), np.array([1.0, 0.0]), np.array([2.0, 0.0]))]
        cfg = SearchConfig(random_triples=0, coarse_grid_points=8)
        report = triangle_search_nd(metric, 2, cfg, probes=probes)
        assert report is not None

    def test_determinism(self):
        metric = lambda a, b: float(np.linalg.norm(a - b)) ** 2
        a = triangle_search_nd(metric, 2, FAST)
        b = triangle_search_nd(metric, 2, FAST)
        assert a.to_dict() == b.to_dict()

    def test_bounds_respected(self):
        seen = []

        def metric(a, b):
            seen.extend([a.copy(), b.copy()])
            return float(np.linalg.norm(a - b)) ** 2

        def sampler(rng, count):
            return rng.uniform(0.5, 2.0, size=(count, 2))

        cfg = SearchConfig(random_triples=100)
        triangle_search_nd(metric, 2, cfg, sampler=sampler, bounds=((0.5, 2.0), (0.5, 2.0)))
        pts = np.vstack(seen)
        assert pts.min() >= 0.5 - 1e-12 and pts.max() <= 2.0 + 1e-12


class TestMiCheck:
    def test_power_means_pass(self):
        for p in (-math.inf, -2.0, 0.0, 0.5, 1.0, math.inf):
            assert mi_check(PowerMeanPower(p, 1.0), FAST) is None

    def test_constant_passes(self):
        assert mi_check(ConstantWeight(3.0), FAST) is None

    def test_exp_product_fails_ratio(self):
        witness = mi_check(ProductWeight(FF_SUITE["exp"], "exp"), FAST)
        assert witness is not None
        assert witness.kind == "ratio-not-decreasing"
        # e^t / t turns increasing past t = 1
        assert witness.t1 >= 0.5

    def test_q_above_one_fails(self):
        witness = mi_check(PowerMeanPower(1.0, 1.5), FAST)
        assert witness is not None
        assert witness.kind == "ratio-not-decreasing"


class TestConvexityCheck:
    def test_norm_like_functions_pass(self):
        for name in ("norm1", "norm2", "norm4", "exp", "affine", "constant", "hinge", "max_one"):
            assert convexity_check(FF_SUITE[name], FAST) is None, name

    def test_concave_fails(self):
        witness = convexity_check(FF_SUITE["sqrt_plus_one"], FAST)
        assert witness is not None
        assert witness.lhs > witness.rhs

    def test_affine_passes_with_equality(self):
        assert convexity_check(lambda t: 5.0 + 2.0 * t, FAST) is None


class TestStrongOrder:
    def test_threshold_order_increasing(self):
        report = strong_order_check(PowerMeanPower(1.0 / 3.0), stolarsky_weight(1.0))
        assert report.verdict == "increasing"
        assert report.witness is None
        assert not report.dips_below_one

    def test_below_threshold_decreasing(self):
        report = strong_order_check(PowerMeanPower(0.30), stolarsky_weight(1.0))
        assert report.verdict == "decreasing-somewhere"
        assert report.witness is not None
        # the ratio must actually drop across the witness pair
        assert report.witness.g2 < report.witness.g1
        assert report.dips_below_one

    def test_constant_ratio_counts_as_increasing(self):
        M = PowerMeanPower(2.0)
        report = strong_order_check(M, M)
        assert report.verdict == "increasing"

    def test_ratio_samples_cover_range(self):
        report = strong_order_check(PowerMeanPower(1.0), stolarsky_weight(1.0))
        xs = [x for x, _ in report.ratio_samples]
        assert xs[0] == pytest.approx(1.0)
        assert xs[-1] == pytest.approx(1e6, rel=1e-6)

    def test_roundtrip(self):
        from relmetrics.verify import OrderReport

        report = strong_order_check(PowerMeanPower(0.30), stolarsky_weight(1.0))
        again = OrderReport.from_dict(report.to_dict())
        assert again == report


class TestPlemConditions:
    def test_boundary_weight_all_true(self):
        report = plem_conditions(PowerMeanPower(1.0 / 3.0), 1.0)
        assert report.sufficient and report.necessary1 and report.necessary2

    def test_fractional_exponent_weight(self):
        report = plem_conditions(PowerMeanPower(1.0, 0.5), 0.5)
        assert report.sufficient and report.necessary1 and report.necessary2

    def test_above_threshold_combination(self):
        # max(1 - 0.9, (2 - 0.9)/3) = 0.3667 <= 0.4
        report = plem_conditions(PowerMeanPower(0.4, 0.9), 0.9)
        assert report.sufficient

    def test_below_threshold_fails(self):
        report = plem_conditions(PowerMeanPower(0.2), 1.0)
        assert not report.sufficient
        assert not report.necessary1

    def test_consistency_with_triangle_search(self):
        # sufficient true -> no violation; a failed necessary condition -> violation
        cases = [(1.0 / 3.0, 1.0), (0.5, 1.0), (0.2, 1.0), (0.25, 0.9)]
        for p, alpha in cases:
            M = PowerMeanPower(p, alpha)
            report = plem_conditions(M, alpha)
            found = triangle_search_1d(M, FAST) is not None
            if report.sufficient:
                assert not found
            if not (report.necessary1 and report.necessary2):
                assert found

    def test_rejects_inhomogeneous(self):
        with pytest.raises(InvalidParameterError):
            plem_conditions(ProductWeight(FF_SUITE["norm1"], "norm1"), 1.0)


class TestRegionHelpers:
    def test_threshold_values(self):
        assert pq_threshold(1.0) == pytest.approx(1.0 / 3.0)
        assert pq_threshold(0.5) == pytest.approx(0.5)
        assert pq_threshold(0.1) == pytest.approx(0.9)

    def test_membership(self):
        assert pq_is_metric(1.0, 1.0)
        assert pq_is_metric(1.0 / 3.0, 1.0)  # closed boundary
        assert not pq_is_metric(0.2, 1.0)
        assert not pq_is_metric(1.0, 1.2)
        assert not pq_is_metric(1.0, -0.5)

    def test_frontier_distance(self):
        assert pq_frontier_distance(1.0 / 3.0, 1.0) == pytest.approx(0.0, abs=1e-3)
        assert pq_frontier_distance(1.0, 1.1) == pytest.approx(0.1, abs=1e-3)
        # nearest boundary piece is the diagonal branch p = 1 - q of the curve
        assert pq_frontier_distance(0.9, 0.5) == pytest.approx(0.4 / math.sqrt(2.0), abs=1e-3)
        # deep inside the region the top edge is the nearest boundary piece
        assert pq_frontier_distance(2.0, 0.5) == pytest.approx(0.5, abs=1e-3)


class TestClassify:
    def test_single_metric_cell(self):
        table = classify_pq_region((1.0, 1.0), (1.0, 1.0), 0.1, FAST)
        assert table.cell(1.0, 1.0).label == "metric"

    def test_single_nonmetric_cell(self):
        table = classify_pq_region((1.0, 1.0), (1.2, 1.2), 0.1, FAST)
        cell = table.cell(1.0, 1.2)
        assert cell.label == "non-metric"
        assert cell.witness is not None

    def test_witness_for_every_nonmetric_cell(self):
        table = classify_pq_region((0.1, 0.5), (0.9, 1.1), 0.2, FAST)
        for cell in table.cells:
            if cell.label == "non-metric":
                assert cell.witness is not None

    def test_roundtrip(self):
        from relmetrics.verify import RegionTable

        table = classify_pq_region((0.2, 1.0), (1.0, 1.2), 0.4, FAST)
        again = RegionTable.from_dict(table.to_dict())
        assert again == table

    def test_rejects_bad_step(self):
        with pytest.raises(ConfigError):
            classify_pq_region((0.1, 1.0), (0.1, 1.0), 0.0, FAST)


class TestLambdaSharpness:
    def test_sharp_constant_clean(self):
        assert lambda_sharpness(-1.0, 2.0, FAST) is None

    def test_below_sharp_constant_violates(self):
        report = lambda_sharpness(-1.0, 1.9, FAST)
        assert report is not None
        assert report.margin > 1e-6

    def test_other_order(self):
        assert lambda_sharpness(-2.0, math.sqrt(2.0), FAST) is None
        assert lambda_sharpness(-2.0, 1.34, FAST) is not None

    def test_rejects_nonnegative_order(self):
        with pytest.raises(InvalidParameterError):
            lambda_sharpness(1.0, 2.0, FAST)


class TestTransformImplications:
    PASSING = [
        PowerMeanPower(1.0, 1.0),
        PowerMeanPower(2.0, 1.0),
        PowerMeanPower(math.inf, 1.0),
        PowerMeanPower(1.0, 0.5),
    ]

    @pytest.mark.parametrize("M", PASSING, ids=lambda M: M.label())
    def test_transforms_of_metrics_stay_metrics(self, M):
        for kind in (MetricKind.LOG1P, MetricKind.ARCSINH, MetricKind.ARCCOSH1P):
            assert triangle_search_transformed(M, kind, FAST) is None

    def test_arccosh_weakest(self):
        # a weight whose raw distance fails but whose arccosh transform passes
        M = PowerMeanPower(0.2, 1.0)
        assert triangle_search_1d(M, FAST) is not None
        assert triangle_search_transformed(M, MetricKind.ARCCOSH1P, FAST) is None


class TestEquivalenceSuite:
    def test_product_triangle_iff_mi_and_convex(self):
        for name, f in FF_SUITE.items():
            M = ProductWeight(f, name)
            found = triangle_search_1d(M, FAST) is not None
            predicted = mi_check(M, FAST) is not None or convexity_check(f, FAST) is not None
            assert found == predicted, name


class TestViolationReportShape:
    def test_margin_field_consistent(self):
        report = triangle_search_1d(PowerMeanPower(0.2, 1.0), FAST)
        assert report.margin == pytest.approx(report.lhs - report.rhs)

    def test_roundtrip_scalar_and_vector(self):
        r1 = ViolationReport(x=1.0, z=2.0, y=3.0, lhs=5.0, rhs=4.0, margin=1.0)
        assert ViolationReport.from_dict(r1.to_dict()) == r1
        r2 = ViolationReport(x=np.array([1.0, 2.0]), z=np.array([0.0, 0.0]),
                             y=np.array([3.0, 4.0]), lhs=5.0, rhs=4.0, margin=1.0)
        back = ViolationReport.from_dict(r2.to_dict())
        assert np.array_equal(back.x, r2.x) and back.lhs == r2.lhs
