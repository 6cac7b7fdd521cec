"""
不变量检查套件单元测试

测试内容:
- 快速检查项在默认容差下通过
- 容差倍率 ≤ 0 时强制失败
- 检查内部异常记为失败
- 报告字段
- CSV重算与缓存一致性检查
"""

import math

import pytest

from app.core.verifier import DEFAULT_CHECKS, InvariantVerifier


FAST_CHECKS = [
    "states.resolution_of_identity",
    "states.orthonormality",
    "states.hardy_equals_k1331",
    "states.k_weights_monotone",
    "chmetrics.operator_equivalence",
    "chmetrics.eigenvalue_ceiling",
    "chmetrics.probability_bounds",
    "chmetrics.marginal_trace",
    "chmetrics.eta_reassembly",
    "chmetrics.hardy_zero_conditions",
    "optimizer.cg_quadratic_bowl",
    "analytic.quartic_oracle",
    "analytic.cubic_oracle",
    "analytic.unit_efficiency",
    "analytic.floor_boundaries",
    "analytic.stationary_consistency",
    "analytic.lambda_monotone",
]


class TestInvariantVerifier:
    """不变量检查器测试类"""

    def test_registered_names_unique(self):
        """测试检查名称唯一且覆盖各模块"""
        names = [name for name, _ in DEFAULT_CHECKS]
        assert len(names) == len(set(names))
        assert {n.split(".")[0] for n in names} == {"states", "chmetrics", "optimizer", "analytic", "cli"}

    def test_fast_checks_pass(self):
        """测试快速检查项全部通过"""
        report = InvariantVerifier(seed=1).run(only=FAST_CHECKS)
        assert len(report.checks) == len(FAST_CHECKS)
        failed = [(c.name, c.residual, c.tolerance, c.detail) for c in report.checks if not c.passed]
        assert not failed

    def test_zero_scale_fails(self):
        """测试容差倍率为0时全部失败"""
        report = InvariantVerifier(seed=1, scale=0.0).run(only=FAST_CHECKS[:3])
        assert not report.passed
        assert report.failed_count == 3

    def test_exception_recorded(self):
        """测试检查内部异常记为失败且不中断后续检查"""
        def broken(v):
            raise RuntimeError("boom")

        def fine(v):
            return 0.0, 1e-12, "ok"

        verifier = InvariantVerifier(seed=1)
        verifier.checks = [("broken", broken), ("fine", fine)]
        report = verifier.run()
        assert [c.passed for c in report.checks] == [False, True]
        assert math.isinf(report.checks[0].residual)
        assert "RuntimeError" in report.checks[0].detail

    def test_report_dict(self):
        """测试报告字典不含耗时"""
        verifier = InvariantVerifier(seed=1)
        verifier.checks = [("fine", lambda v: (0.0, 1e-12, "ok"))]
        data = verifier.run().to_dict()
        assert data["passed"] is True
        assert data["total"] == 1
        assert data["failed"] == 0
        assert "duration" not in data["checks"][0]

    def test_random_samples_deterministic(self):
        """测试随机样本由种子与流编号决定"""
        a = InvariantVerifier(seed=5).random_samples(2, 5)
        b = InvariantVerifier(seed=5).random_samples(2, 5)
        assert a == b
        assert len(a) == 5


@pytest.mark.parametrize("name", [
    "analytic.symmetric_reduction",
    "analytic.symmetry_optimal",
    "cli.csv_roundtrip",
    "cli.cache_matches_fresh",
])
def test_slow_checks(name):
    """测试对称化与输出文件检查通过"""
    report = InvariantVerifier(seed=2).run(only=[name])
    assert report.passed, report.checks[0].detail
