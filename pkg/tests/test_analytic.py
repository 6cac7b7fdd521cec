"""
解析特征值分析单元测试

测试内容:
- 特征多项式与数值本征值一致
- 三角法三次方程根与数值本征值一致
- 最优 t 的四次方程（η = 1 时的重根）
- 驻点表达式与奇异/越界输入
- 最大违背随效率单调，η = 1 时为Tsirelson值
"""

import math

import numpy as np
import pytest

from app.models.exceptions import InvalidEfficiency, SingularEfficiency
from app.models.result_model import AnalyticPoint
from app.core.analytic import (
    ETA_FLOOR,
    analytic_frontier,
    build_B,
    char_quartic,
    char_quartic_symmetric,
    max_violation_for_eta,
    optimal_t,
    polynomial_residual,
    reduced_cubic_roots,
    singlet_eigenvalue,
    stationary_lambda,
    t_quartic_coefficients,
    t_quartic_real_roots,
)
from app.core.chmetrics import TSIRELSON_CH


class TestOperator:
    """算符与特征多项式测试类"""

    def test_symmetric(self):
        """测试 B 为实对称矩阵"""
        B = build_B(AnalyticPoint(0.9, 0.3, 0.6))
        assert np.allclose(B, B.T)

    @pytest.mark.parametrize("eta,s,t", [(0.9, 0.3, 0.6), (1.0, 0.5, 0.5), (0.7, 0.1, 0.95), (0.8, 0.0, 1.0)])
    def test_quartic_roots_are_eigenvalues(self, eta, s, t):
        """测试数值本征值是特征多项式的根"""
        point = AnalyticPoint(eta, s, t)
        coefficients = char_quartic(point)
        for lam in np.linalg.eigvalsh(build_B(point)):
            assert polynomial_residual(coefficients, lam) < 1e-10

    def test_symmetric_quartic(self):
        """测试 s = t 时两种系数一致"""
        assert np.allclose(char_quartic(AnalyticPoint(0.85, 0.4, 0.4)), char_quartic_symmetric(0.85, 0.4))

    def test_point_validation(self):
        """测试参数点范围"""
        with pytest.raises(InvalidEfficiency):
            AnalyticPoint(0.0, 0.5, 0.5)
        with pytest.raises(ValueError):
            AnalyticPoint(0.9, 1.5, 0.5)


class TestReducedCubic:
    """约化三次方程测试类"""

    @pytest.mark.parametrize("eta,t", [(0.7, 0.3), (0.85, 0.5), (1.0, 0.5), (0.95, 0.9)])
    def test_roots_match_eigenvalues(self, eta, t):
        """测试三角法根与数值本征值一致"""
        eigen = reduced_cubic_roots(eta, t)
        numeric = np.linalg.eigvalsh(build_B(AnalyticPoint(eta, t, t)))
        assert np.allclose(np.sort(eigen.as_array()), numeric, atol=1e-9)

    def test_roots_ordered(self):
        """测试 λ1 ≥ λ2 ≥ λ3"""
        eigen = reduced_cubic_roots(0.8, 0.4)
        assert eigen.lambda1 >= eigen.lambda2 >= eigen.lambda3

    def test_singlet_nonpositive(self):
        """测试单态本征值不为正"""
        for eta in (0.7, 0.9, 1.0):
            for t in (0.0, 0.5, 1.0):
                assert singlet_eigenvalue(eta, t) <= 0.0

    def test_unit_efficiency_value(self):
        """测试 η = 1, t = 1/2 时 λ1 = (√2−1)/2"""
        assert reduced_cubic_roots(1.0, 0.5).lambda1 == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)

    @pytest.mark.parametrize("eta,t", [(0.0, 0.5), (1.2, 0.5)])
    def test_rejects_efficiency(self, eta, t):
        """测试效率越界"""
        with pytest.raises(InvalidEfficiency):
            reduced_cubic_roots(eta, t)

    def test_rejects_t(self):
        """测试 t 越界"""
        with pytest.raises(ValueError):
            reduced_cubic_roots(0.9, -0.1)


class TestStationary:
    """驻点条件测试类"""

    def test_unit_quartic_double_root(self):
        """测试 η = 1 时四次方程为 (2t²−3t+1)²"""
        expected = np.polymul([2.0, -3.0, 1.0], [2.0, -3.0, 1.0])
        assert np.allclose(t_quartic_coefficients(1.0), expected)

    def test_unit_optimal_t(self):
        """测试 η = 1 时最优 t = 1/2"""
        assert optimal_t(1.0) == pytest.approx(0.5, abs=1e-8)

    def test_real_roots_are_roots(self):
        """测试实根的残差"""
        coefficients = t_quartic_coefficients(0.9)
        for root in t_quartic_real_roots(0.9):
            assert polynomial_residual(coefficients, root) < 1e-10

    def test_singular_at_unit_efficiency(self):
        """测试驻点表达式在 η = 1 处奇异"""
        with pytest.raises(SingularEfficiency):
            stationary_lambda(1.0, 0.5)

    def test_floor_zero(self):
        """测试 η = 2/3, t = 0 时驻点表达式为零"""
        assert stationary_lambda(ETA_FLOOR, 0.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("eta", [0.8, 0.9, 0.95])
    def test_stationary_consistency(self, eta):
        """测试驻点表达式与最优 t 处的 λ1 一致"""
        t = optimal_t(eta)
        assert stationary_lambda(eta, t) == pytest.approx(reduced_cubic_roots(eta, t).lambda1, abs=1e-9)

    @pytest.mark.parametrize("eta", [0.5, ETA_FLOOR, 1.01])
    def test_optimal_t_rejects(self, eta):
        """测试 η ∉ (2/3, 1]"""
        with pytest.raises(InvalidEfficiency):
            optimal_t(eta)


class TestFrontier:
    """最大违背前沿测试类"""

    def test_unit_efficiency(self):
        """测试 η = 1 时为Tsirelson值与最大纠缠态"""
        t, lambda1, state = max_violation_for_eta(1.0)
        assert t == pytest.approx(0.5, abs=1e-8)
        assert lambda1 == pytest.approx(TSIRELSON_CH, abs=1e-12)
        assert state.ratio() == pytest.approx(1.0, abs=1e-6)

    def test_monotone_in_eta(self):
        """测试最大违背随效率严格增加"""
        points = analytic_frontier([0.7, 0.75, 0.8, 0.9, 1.0])
        values = [p.lambda1 for p in points]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(0.0 < p.ratio <= 1.0 for p in points)

    def test_optimal_state_less_entangled(self):
        """测试效率降低时最优态纠缠减弱"""
        low = max_violation_for_eta(0.75)
        high = max_violation_for_eta(0.95)
        assert low.ratio < high.ratio

    def test_to_row(self):
        """测试输出行字段"""
        row = max_violation_for_eta(0.9).to_row()
        assert list(row) == ["eta", "t", "lambda1", "ratio"]

    def test_threshold_of_maximally_entangled(self):
        """测试 η ≈ 2(√2−1) 时最优态不是最大纠缠态且仍有正的违背"""
        point = max_violation_for_eta(0.828)
        assert point.lambda1 == pytest.approx(0.0359, abs=5e-4)
        assert point.ratio == pytest.approx(0.546, abs=5e-3)
        assert point.ratio < 0.98
