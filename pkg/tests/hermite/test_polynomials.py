"""测试归一化 Hermite 多项式。"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernel_dynamics.hermite import he_all, he_eval


class TestHermitePolynomials:
    """测试 he_k 的取值。"""

    def test_trivial_values(self):
        assert he_eval(0, 3.7) == 1.0
        assert he_eval(2, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert he_eval(3, 0.0) == 0.0

    def test_explicit_low_degrees(self):
        """he_2 = (x²-1)/√2，he_3 = (x³-3x)/√6。"""
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(he_eval(2, x), (x ** 2 - 1) / math.sqrt(2), atol=1e-14)
        np.testing.assert_allclose(he_eval(3, x), (x ** 3 - 3 * x) / math.sqrt(6), atol=1e-13)

    def test_he_all_shape(self):
        values = he_all(5, np.zeros((2, 3)))
        assert values.shape == (6, 2, 3)

    def test_high_degree_stable(self):
        """k ≤ 200、|x| ≤ 15 时没有溢出。"""
        values = he_all(200, np.linspace(-15, 15, 61))
        assert np.all(np.isfinite(values))

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            he_all(-1, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(k=st.integers(min_value=0, max_value=30), x=st.floats(min_value=-5, max_value=5))
    def test_parity(self, k, x):
        """he_k(-x) = (-1)^k he_k(x)。"""
        assert he_eval(k, -x) == pytest.approx((-1) ** k * he_eval(k, x), rel=1e-10, abs=1e-10)
