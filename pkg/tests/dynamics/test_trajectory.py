"""测试离散核序列。"""

import math

import numpy as np
import pytest

from kernel_dynamics.activations import CATALOG_NAMES
from kernel_dynamics.dynamics import cobweb, iterate, iterate_gap_to_one
from kernel_dynamics.exceptions import InvalidParameterError
from kernel_dynamics.kernel import find_fixed_point

NONLINEAR_NAMES = tuple(name for name in CATALOG_NAMES if name != "identity")


class TestIterate:
    """测试 ρ_{ℓ+1} = κ(ρ_ℓ)。"""

    def test_hermite2_squares(self, kernel_maps):
        traj = iterate(kernel_maps["hermite:2"], 0.5, 3)
        np.testing.assert_allclose(traj.values, [0.5, 0.25, 0.0625, 0.00390625], rtol=1e-12)

    def test_double_exponential(self, kernel_maps):
        """κ(ρ) = ρ² 时 ρ_ℓ = ρ0^(2^ℓ)。"""
        traj = iterate(kernel_maps["hermite:2"], 0.5, 6)
        for ell in range(7):
            assert traj.values[ell] == pytest.approx(0.5 ** (2 ** ell), rel=1e-12, abs=1e-12)

    def test_exp_example(self, kernel_maps):
        traj = iterate(kernel_maps["exp"], 0.0, 2)
        assert traj.values[1] == pytest.approx(math.exp(-1), abs=1e-10)
        assert traj.values[2] == pytest.approx(0.5315, abs=1e-4)

    def test_depth_zero(self, relu_map):
        traj = iterate(relu_map, 0.3, 0)
        assert len(traj) == 1
        assert traj.final == 0.3

    def test_fixed_point_constant(self, kernel_maps):
        km = kernel_maps["tanh"]
        traj = iterate(km, 0.0, 20)
        assert np.all(np.abs(traj.values) < 1e-15)

    @pytest.mark.parametrize("name", NONLINEAR_NAMES)
    def test_constant_from_fixed_point(self, kernel_maps, name):
        """从 ρ* 出发的序列保持为 ρ*。"""
        km = kernel_maps[name]
        rho_star = find_fixed_point(km).rho_star
        np.testing.assert_allclose(iterate(km, rho_star, 5).values, rho_star, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("name", ["relu", "leaky_relu", "exp"])
    def test_polynomial_case_reaches_one(self, kernel_maps, name):
        """case3 的序列单调趋向 1，中途没有别的不动点。"""
        values = iterate(kernel_maps[name], 0.0, 5000).values
        assert np.all(np.diff(values) >= -1e-15)
        assert 1.0 - values[-1] < 1e-3
        assert values[-1] <= 1.0 + 1e-15

    @pytest.mark.parametrize("name", ["relu", "gelu", "sigmoid", "elu"])
    def test_bitwise_reproducible(self, kernel_maps, name):
        """每一步都与直接计算 κ(ρ_ℓ) 逐位相同。"""
        km = kernel_maps[name]
        traj = iterate(km, -0.4, 30)
        for ell in range(30):
            assert traj.values[ell + 1] == km.evaluate(traj.values[ell])

    @pytest.mark.parametrize("name,rho0", [("gelu", 0.95), ("gelu", 0.1), ("elu", 0.2), ("sigmoid", 0.3)])
    def test_monotone_approach(self, kernel_maps, name, rho0):
        """ρ0 ≥ 0 时序列单调趋向 ρ*。"""
        km = kernel_maps[name]
        rho_star = find_fixed_point(km).rho_star
        values = iterate(km, rho0, 100).values
        dist = np.abs(values - rho_star)
        assert np.all(np.diff(dist) <= 1e-15)
        steps = np.diff(values)
        assert np.all(steps * np.sign(rho_star - rho0) >= -1e-15)

    def test_bounds_attached(self, kernel_maps):
        traj = iterate(kernel_maps["tanh"], 0.5, 10)
        assert traj.bound_functional == "abs_rho_over_one_minus_abs_rho"
        assert traj.bounds[0] == pytest.approx(1.0)
        assert np.all(np.isfinite(traj.bounds))

    def test_linear_map_no_bounds(self, kernel_maps):
        traj = iterate(kernel_maps["identity"], 0.5, 5)
        np.testing.assert_allclose(traj.values, 0.5, atol=1e-14)
        assert traj.bound_functional is None
        assert np.all(np.isnan(traj.bounds))

    def test_boundary_start_no_bounds(self, relu_map):
        traj = iterate(relu_map, -1.0, 5)
        assert np.all(np.isnan(traj.bounds))

    def test_invalid_arguments(self, relu_map):
        with pytest.raises(InvalidParameterError):
            iterate(relu_map, 1.5, 3)
        with pytest.raises(InvalidParameterError):
            iterate(relu_map, 0.5, -1)

    def test_to_frame(self, relu_map):
        frame = iterate(relu_map, 0.5, 4).to_frame()
        assert list(frame.columns) == ["ell_or_t", "rho", "bound", "functional_name"]
        assert len(frame) == 5
        assert frame["functional_name"].iloc[0] == "abs_rho_minus_one"


class TestCobweb:
    """测试蛛网图数据。"""

    def test_pairs(self, kernel_maps):
        km = kernel_maps["hermite:2"]
        pairs = cobweb(km, 0.5, 3)
        assert len(pairs) == 3
        for a, b in pairs:
            assert b == km.evaluate(a)
        assert pairs[1][0] == pairs[0][1]


class TestGapToOne:
    """测试 1-ρ 的无抵消迭代。"""

    def test_agrees_with_iterate(self, kernel_maps):
        km = kernel_maps["sigmoid"]
        gaps = iterate_gap_to_one(km, 1.0, 8)
        values = iterate(km, 0.0, 8).values
        np.testing.assert_allclose(gaps, 1.0 - values, atol=1e-12)

    def test_sigmoid_reaches_float32_floor(self, kernel_maps):
        """sigmoid 在 48 层内距离低于 2^-128。"""
        gaps = iterate_gap_to_one(kernel_maps["sigmoid"], 1.0, 48)
        assert gaps[-1] < 2.0 ** -128
        assert gaps[-1] > 0.0
        assert np.all(np.diff(gaps) < 0)

    def test_exp_reciprocal_decay(self, kernel_maps):
        """exp: x ↦ 1 - e^{-x}，约 2/ℓ 衰减。"""
        gaps = iterate_gap_to_one(kernel_maps["exp"], 1.0, 400)
        assert gaps[400] == pytest.approx(2.0 / 400, rel=0.05)

    def test_invalid_gap(self, relu_map):
        with pytest.raises(InvalidParameterError):
            iterate_gap_to_one(relu_map, 2.5, 3)
        with pytest.raises(InvalidParameterError):
            iterate_gap_to_one(relu_map, 0.5, -2)
