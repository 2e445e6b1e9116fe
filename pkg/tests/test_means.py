"""Tests for the bivariate means and weight-function layer."""

import math

import numpy as np
import pytest

from relmetrics.errors import EvaluationError, InvalidParameterError
from relmetrics.means import (
    ConstantWeight,
    CustomWeight,
    MaxMean,
    MinMean,
    PowerMeanPower,
    ProductWeight,
    ScaledPowerMean,
    logarithmic_mean,
    power_mean,
    stolarsky_mean,
    stolarsky_quasimean,
    stolarsky_weight,
    trace,
    weight_eval,
)

ALL_WEIGHTS = [
    PowerMeanPower(2.0, 1.0),
    PowerMeanPower(-1.0, 0.5),
    PowerMeanPower(math.inf, 1.0),
    ScaledPowerMean(1.0, 0.5),
    ProductWeight(lambda t: 1.0 + t, "plus1"),
    MinMean(),
    MaxMean(),
    ConstantWeight(5.0),
    stolarsky_weight(0.7),
]


class TestPowerMean:
    def test_arithmetic(self):
        assert power_mean(1, 1, 3) == pytest.approx(2.0)

    def test_geometric(self):
        assert power_mean(0, 4, 9) == pytest.approx(6.0)

    def test_zero_convention_nonpositive_order(self):
        # A_p(x, 0) = 0 for p <= 0
        assert power_mean(-2, 5, 0) == 0.0
        assert power_mean(0, 5, 0) == 0.0
        assert power_mean(-math.inf, 5, 0) == 0.0

    def test_min_max_limits(self):
        assert power_mean(-math.inf, 2, 5) == 2.0
        assert power_mean(math.inf, 2, 5) == 5.0

    def test_positive_order_at_zero(self):
        # for p > 0 the formula itself gives x * 2^(-1/p)
        assert power_mean(1, 3, 0) == pytest.approx(1.5)
        assert power_mean(2, 3, 0) == pytest.approx(3 / math.sqrt(2))

    def test_diagonal(self):
        for p in (-7.0, -1.0, 0.0, 0.5, 3.0, math.inf, -math.inf):
            assert power_mean(p, 4.2, 4.2) == pytest.approx(4.2)

    def test_monotone_in_order(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            x, y = rng.uniform(0.0, 100.0, size=2)
            ps = np.sort(rng.uniform(-20.0, 20.0, size=5))
            vals = [power_mean(p, x, y) for p in ps]
            for lo_v, hi_v in zip(vals, vals[1:]):
                assert lo_v <= hi_v * (1.0 + 1e-12)

    def test_homogeneous(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            x, y, s = rng.uniform(0.01, 50.0, size=3)
            p = rng.uniform(-10, 10)
            assert power_mean(p, s * x, s * y) == pytest.approx(s * power_mean(p, x, y), rel=1e-12)

    def test_large_order_no_overflow(self):
        assert power_mean(500, 1e300, 1e-300) == pytest.approx(1e300, rel=1e-2)
        assert power_mean(-500, 1e300, 1e-300) == pytest.approx(1e-300, rel=1e-2)

    def test_tiny_order_not_snapped(self):
        # near p = 0 the generic branch must track the expansion
        # A_p = G exp(p log(x/y)^2 / 8 + O(p^2)), not collapse to G
        x, y = math.exp(20.0), 1.0
        for p in (1e-12, -1e-12):
            want = math.sqrt(x * y) * math.exp(p * math.log(x / y) ** 2 / 8.0)
            assert power_mean(p, x, y) == pytest.approx(want, rel=1e-13)

    def test_rejects_negative_input(self):
        with pytest.raises(InvalidParameterError):
            power_mean(2, -1, 3)

    def test_array_broadcast(self):
        xs = np.array([1.0, 4.0, 0.0])
        out = power_mean(0, xs, 9.0)
        np.testing.assert_allclose(out, [3.0, 6.0, 0.0])


class TestStolarskyQuasimean:
    def test_diagonal_is_power(self):
        assert stolarsky_quasimean(1.0, 7.0, 7.0) == pytest.approx(7.0)
        assert stolarsky_quasimean(0.4, 7.0, 7.0) == pytest.approx(7.0**0.4)

    def test_logarithmic_zero_convention(self):
        assert stolarsky_quasimean(1.0, 5.0, 0.0) == 0.0
        assert logarithmic_mean(5.0, 0.0) == 0.0

    def test_hand_value(self):
        # (1-a)(x-y)/(x^(1-a) - y^(1-a)) at a=1/2: 0.5*3/(2-1)
        assert stolarsky_quasimean(0.5, 4.0, 1.0) == pytest.approx(1.5)

    def test_log_mean_closed_form(self):
        assert stolarsky_quasimean(1.0, math.e, 1.0) == pytest.approx(math.e - 1.0)

    def test_rejects_bad_exponent(self):
        for a in (0.0, -0.5, 1.5):
            with pytest.raises(InvalidParameterError):
                stolarsky_quasimean(a, 1.0, 2.0)

    def test_alpha_homogeneity(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            x, y, s = rng.uniform(0.01, 40.0, size=3)
            a = rng.uniform(0.05, 1.0)
            got = stolarsky_quasimean(a, s * x, s * y)
            want = s**a * stolarsky_quasimean(a, x, y)
            assert got == pytest.approx(want, rel=1e-12)

    def test_quasimean_sandwich(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            x, y = rng.uniform(0.0, 100.0, size=2)
            a = rng.uniform(0.05, 1.0)
            v = stolarsky_quasimean(a, x, y)
            assert min(x**a, y**a) - 1e-12 <= v <= max(x**a, y**a) + 1e-12

    def test_continuity_at_diagonal(self):
        # guards the cancellation-safe branch across the 1e-8 switch
        for a in (0.3, 1.0):
            for x in (1.0, 1e-3, 1e4):
                for eps in (1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
                    v = stolarsky_quasimean(a, x, x * (1.0 + eps))
                    assert abs(v / x**a - 1.0) <= 5.0 * eps + 1e-15

    def test_seam_consistency(self):
        # values just above and below the near-diagonal switch agree closely
        x = 3.0
        below = stolarsky_quasimean(0.5, x, x * (1 + 0.9e-8))
        above = stolarsky_quasimean(0.5, x, x * (1 + 1.1e-8))
        assert below == pytest.approx(above, rel=1e-9)


class TestStolarskyMean:
    def test_log_mean_at_zero_order(self):
        assert stolarsky_mean(0.0, math.e, 1.0) == pytest.approx(math.e - 1.0)

    def test_diagonal(self):
        assert stolarsky_mean(0.37, 9.0, 9.0) == pytest.approx(9.0)

    def test_hand_value(self):
        # St_q = S_(1-q)^(1/(1-q)); at q = 1/2 this squares 1.5
        assert stolarsky_mean(0.5, 4.0, 1.0) == pytest.approx(2.25)

    def test_relation_to_quasimean(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            x, y = rng.uniform(0.01, 50.0, size=2)
            q = rng.uniform(0.0, 0.999)
            want = stolarsky_quasimean(1.0 - q, x, y) ** (1.0 / (1.0 - q))
            assert stolarsky_mean(q, x, y) == pytest.approx(want, rel=1e-12)

    def test_rejects_bad_order_and_nonpositive(self):
        with pytest.raises(InvalidParameterError):
            stolarsky_mean(1.0, 2.0, 3.0)
        with pytest.raises(InvalidParameterError):
            stolarsky_mean(-0.1, 2.0, 3.0)
        with pytest.raises(InvalidParameterError):
            stolarsky_mean(0.5, 0.0, 3.0)


class TestTrace:
    def test_normalized_mean_at_one(self):
        assert trace(PowerMeanPower(1.0), 1.0) == pytest.approx(1.0)

    def test_max_mean(self):
        assert trace(PowerMeanPower(math.inf), 3.0) == pytest.approx(3.0)

    def test_cube_root_mean(self):
        # ((8^(1/3) + 1)/2)^3
        assert trace(PowerMeanPower(1.0 / 3.0), 8.0) == pytest.approx(3.375)

    def test_rejects_below_one(self):
        with pytest.raises(InvalidParameterError):
            trace(PowerMeanPower(1.0), 0.5)


class TestWeightEval:
    def test_product(self):
        M = ProductWeight(lambda t: 1.0 + t, "plus1")
        assert weight_eval(M, 2.0, 3.0) == pytest.approx(12.0)

    def test_constant(self):
        assert weight_eval(ConstantWeight(5.0), 0.0, 0.0) == pytest.approx(5.0)

    def test_min(self):
        assert weight_eval(MinMean(), 2.0, 7.0) == pytest.approx(2.0)

    def test_scaled(self):
        assert weight_eval(ScaledPowerMean(1.0, 3.0), 1.0, 3.0) == pytest.approx(6.0)

    def test_product_requires_positive_factor(self):
        M = ProductWeight(lambda t: t - 1.0, "shifted")
        with pytest.raises(EvaluationError):
            weight_eval(M, 0.5, 2.0)

    @pytest.mark.parametrize("M", ALL_WEIGHTS, ids=lambda M: M.label())
    def test_symmetry(self, M):
        rng = np.random.default_rng(17)
        for _ in range(50):
            x, y = rng.uniform(0.0, 100.0, size=2)
            if isinstance(M, PowerMeanPower) and M.p <= 0 and min(x, y) == 0.0:
                continue
            assert weight_eval(M, x, y) == weight_eval(M, y, x)

    @pytest.mark.parametrize("M", ALL_WEIGHTS, ids=lambda M: M.label())
    def test_positivity_off_axes(self, M):
        rng = np.random.default_rng(23)
        for _ in range(50):
            x, y = rng.uniform(1e-6, 100.0, size=2)
            assert weight_eval(M, x, y) > 0.0

    def test_custom_weight(self):
        M = CustomWeight(lambda x, y: np.maximum(x, y) + 1.0, "maxplus")
        assert weight_eval(M, 2.0, 5.0) == pytest.approx(6.0)

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            PowerMeanPower(1.0, 0.0)
        with pytest.raises(InvalidParameterError):
            PowerMeanPower(1.0, -2.0)
        with pytest.raises(InvalidParameterError):
            ConstantWeight(0.0)
        with pytest.raises(InvalidParameterError):
            ScaledPowerMean(1.0, -1.0)


class TestIncreasingHomogeneousIsMI:
    """Increasing + alpha-homogeneous implies x P(z,y) >= z P(x,y) and
    y P(x,z) <= z P(x,y) for 0 < y <= z <= x."""

    @pytest.mark.parametrize("weight,alpha", [
        (PowerMeanPower(1.0), 1.0),
        (PowerMeanPower(-2.0), 1.0),
        (PowerMeanPower(0.5, 0.5), 0.5),
        (stolarsky_weight(0.6), 0.6),
        (MinMean(), 1.0),
    ])
    def test_sampled_mi_inequalities(self, weight, alpha):
        rng = np.random.default_rng(31)
        for _ in range(200):
            y, z, x = np.sort(rng.uniform(1e-3, 100.0, size=3))
            pzy = weight_eval(weight, z, y)
            pxy = weight_eval(weight, x, y)
            pxz = weight_eval(weight, x, z)
            assert x * pzy >= z * pxy * (1.0 - 1e-12)
            assert y * pxz <= z * pxy * (1.0 + 1e-12)
