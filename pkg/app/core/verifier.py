"""
不变量检查套件
以固定种子逐项检查各计算模块的性质，供 verify 命令使用

每项检查返回 CheckResult(残差, 容差)；残差为非负的违背量，
residual ≤ tolerance × scale 即通过。scale ≤ 0 时所有检查强制失败（测试用）。
"""

import logging
import math
import tempfile
import time
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.models.config_model import OptimizerSettings, SearchSettings
from app.models.enums import Strategy
from app.models.result_model import AnalyticPoint, CheckResult, VerifyReport
from app.models.state_model import MeasurementConfig, MeasurementSetting, ExponentQuad
from app.core import analytic, chmetrics, k_search, optimizer, states
from app.core.sweep import StrategySpec, sweep
from app.utils.cache import ResultCache
from app.utils.csv_parser import export_curve_csv, parse_curve_csv

logger = logging.getLogger(__name__)

CheckFn = Callable[["InvariantVerifier"], Tuple[float, float, str]]


class InvariantVerifier:
    """
    不变量检查器

    Attributes:
        seed: 随机种子
        scale: 容差倍率
        optimizer_settings: 优化类检查使用的（缩小规模的）参数
        checks: 已注册的检查列表 [(名称, 函数)]
    """

    def __init__(self, seed: int, scale: float = 1.0, sample_count: int = 400):
        """
        初始化检查器

        Args:
            seed: 随机种子
            scale: 容差倍率
            sample_count: 优化类检查的多起点数量
        """
        self.seed = int(seed)
        self.scale = float(scale)
        self.optimizer_settings = OptimizerSettings(
            sample_count=sample_count,
            tolerance=1e-8,
            max_iterations=500,
            seed=self.seed,
        )
        self.checks: List[Tuple[str, CheckFn]] = list(DEFAULT_CHECKS)

    def rng(self, stream: int) -> np.random.Generator:
        return optimizer.make_rng(self.seed, stream)

    def random_samples(self, stream: int, count: int):
        """随机 (态, 配置) 样本"""
        rng = self.rng(stream)
        ratios = rng.uniform(1e-3, 1.0, size=count)
        vectors = optimizer.random_starts(rng, count)
        return [
            (states.make_state(r), MeasurementConfig.from_vector(v))
            for r, v in zip(ratios, vectors)
        ]

    def run(self, only: Optional[List[str]] = None) -> VerifyReport:
        """
        执行全部（或指定）检查

        检查内部抛出的异常记为失败，不中断后续检查。
        """
        report = VerifyReport()
        for name, fn in self.checks:
            if only and name not in only:
                continue
            start = time.perf_counter()
            try:
                residual, tolerance, detail = fn(self)
                passed = self.scale > 0 and residual <= tolerance * self.scale
            except Exception as e:
                residual, tolerance, detail, passed = math.inf, 0.0, f"{type(e).__name__}: {e}", False
            result = CheckResult(
                name=name,
                passed=passed,
                residual=float(residual),
                tolerance=float(tolerance * self.scale),
                detail=detail,
                duration=time.perf_counter() - start,
            )
            logger.info("check %s passed=%s residual=%.3e", name, passed, residual)
            report.checks.append(result)
        return report


# ============ states ============

def check_resolution_of_identity(v: InvariantVerifier):
    rng = v.rng(1)
    worst = 0.0
    for phi, nu in zip(rng.uniform(0, math.pi, 200), rng.uniform(0, 2 * math.pi, 200)):
        a, b = states.basis_vectors(MeasurementSetting(phi, nu))
        identity = np.outer(a, a.conj()) + np.outer(b, b.conj())
        worst = max(worst, float(np.max(np.abs(identity - np.eye(2)))))
    return worst, 1e-13, "max |vv† + uu† − I|"


def check_orthonormality(v: InvariantVerifier):
    rng = v.rng(2)
    worst = 0.0
    for phi, nu in zip(rng.uniform(0, math.pi, 200), rng.uniform(0, 2 * math.pi, 200)):
        a, b = states.basis_vectors(MeasurementSetting(phi, nu))
        worst = max(
            worst,
            abs(np.vdot(b, a)),
            abs(np.linalg.norm(a) - 1.0),
            abs(np.linalg.norm(b) - 1.0),
        )
    return float(worst), 1e-14, "max(|⟨u|v⟩|, |‖v‖−1|, |‖u‖−1|)"


def check_hardy_equals_k1331(v: InvariantVerifier):
    worst = 0.0
    for ratio in np.linspace(0.01, 1.0, 100):
        state = states.make_state(ratio)
        hardy = states.hardy_config(state)
        kcfg = states.k_config(state, ExponentQuad(1, 3, 3, 1))
        for sh, sk in zip(hardy.settings, kcfg.settings):
            vh, _ = states.basis_vectors(sh)
            vk, _ = states.basis_vectors(sk)
            worst = max(worst, min(np.max(np.abs(vh - vk)), np.max(np.abs(vh + vk))))
    return float(worst), 1e-12, "hardy_config vs k_config(1,3,3,1)，100点网格"


def check_k_weights_monotone(v: InvariantVerifier):
    worst = 0.0
    for ratio in (0.05, 0.3, 0.6, 0.9, 0.99):
        sines = np.array([states.exponent_weights(ratio, k)[0] for k in range(1, 1025)])
        worst = max(worst, float(np.max(np.maximum(0.0, -np.diff(sines)))), 1.0 - sines[-1] if ratio <= 0.9 else 0.0)
    return worst, 1e-12, "sinφ 关于 k 单调不减且趋于1"


# ============ chmetrics ============

def check_operator_equivalence(v: InvariantVerifier):
    worst = 0.0
    for state, config in v.random_samples(3, 1000):
        report = chmetrics.ch_q(state, config)
        worst = max(worst, abs(report.q - report.q_operator))
    return worst, 1e-12, "概率路径与算符路径，1000个随机样本"


def check_tsirelson_ceiling(v: InvariantVerifier):
    worst = -math.inf
    for state, config in v.random_samples(4, 1000):
        worst = max(worst, chmetrics.ch_q(state, config).q - chmetrics.TSIRELSON_CH)
    return max(0.0, worst), 1e-9, f"max(q) − (1/√2 − 1/2) = {worst:.3e}"


def check_eigenvalue_ceiling(v: InvariantVerifier):
    worst = 0.0
    for state, config in v.random_samples(5, 500):
        excess = chmetrics.ch_q(state, config).q - chmetrics.operator_max_eigenvalue(config)
        worst = max(worst, excess)
    return worst, 1e-12, "q ≤ λ_max(Î_CH)"


def check_probability_bounds(v: InvariantVerifier):
    worst = 0.0
    for state, config in v.random_samples(6, 300):
        s1, s2, s3, _ = config.settings
        total = sum(
            chmetrics.joint_probability(state, s1, fa, s3, fb)
            for fa in (False, True) for fb in (False, True)
        )
        report = chmetrics.ch_q(state, config)
        for p in (report.p23, report.p1t3, report.p14, report.p2t4):
            worst = max(worst, -p, p - 1.0)
        worst = max(worst, abs(total - 1.0))
    return worst, 1e-12, "概率 ∈ [0, 1] 且四种翻转组合之和为1"


def check_marginal_trace(v: InvariantVerifier):
    worst = 0.0
    for state, config in v.random_samples(7, 300):
        rho = states.reduced_state(state).matrix()
        for setting in config.settings:
            vec, _ = states.basis_vectors(setting)
            trace = float(np.real(np.trace(rho @ np.outer(vec, vec.conj()))))
            worst = max(worst, abs(trace - chmetrics.marginal_probability(state, setting)))
    return worst, 1e-13, "P(φ) = tr(ρ_red |v⟩⟨v|)"


def check_eta_reassembly(v: InvariantVerifier):
    worst = 0.0
    for state, config in v.random_samples(8, 1000):
        report = chmetrics.ch_q(state, config)
        if report.eta_crit is None:
            continue
        q = report.p23 - report.p1t3 - report.p14 - report.p2t4
        eta = (report.m2 + report.m3) / (q + report.m2 + report.m3)
        worst = max(worst, abs(eta - report.eta_crit))
    return worst, 1e-14, "η_crit 由报告字段重新组装"


def check_eberhard_monotone(v: InvariantVerifier):
    worst = 0.0
    etas = np.linspace(0.05, 1.0, 20)
    for state, config in v.random_samples(9, 100):
        margins = [chmetrics.eberhard_margin(state, config, e) for e in etas]
        worst = max(worst, float(np.max(np.maximum(0.0, -np.diff(margins)))))
        report = chmetrics.ch_q(state, config)
        if report.eta_crit is not None:
            worst = max(worst, abs(chmetrics.eberhard_margin(state, config, report.eta_crit)))
    return worst, 1e-12, "余量关于 η 递增，且在 η_crit 处为0"


def check_hardy_zero_conditions(v: InvariantVerifier):
    worst = 0.0
    for ratio in np.linspace(0.01, 0.99, 99):
        state = states.make_state(ratio)
        report = chmetrics.ch_q(state, states.hardy_config(state))
        worst = max(
            worst,
            report.p1t3, report.p14, report.p2t4,
            abs(report.p23 - chmetrics.hardy_fraction(state)),
        )
    return worst, 1e-12, "Hardy零条件，α ≠ β 的99点网格"


# ============ optimizer ============

def check_cg_quadratic_bowl(v: InvariantVerifier):
    center = np.linspace(-1.0, 1.0, 8)
    result = optimizer.cg_optimize(
        lambda x: -sum((x[i] - center[i]) ** 2 for i in range(8)),
        np.zeros(8),
        OptimizerSettings(sample_count=1, tolerance=1e-10, max_iterations=200),
    )
    residual = max(float(np.max(np.abs(result.point - center))), abs(result.value))
    return residual, 1e-8, f"status={result.status.value}"


def check_cg_gradient_norm(v: InvariantVerifier):
    settings = v.optimizer_settings.model_copy(update={"tolerance": 1e-7, "sample_count": 50})
    state = states.make_state(0.6)
    record = optimizer.max_violation(state, settings)

    def objective(x):
        return chmetrics.batch_violation(state.alpha, state.beta, x)[0]

    grad = optimizer.finite_difference_gradient(
        objective, record.config.to_vector()[None, :], settings.gradient_step
    )
    return float(np.linalg.norm(grad)), 10 * settings.tolerance, "最优点有限差分梯度范数"


def check_k_search_oracle(v: InvariantVerifier):
    worst = 0.0
    for ratio in (0.35, 0.75):
        state = states.make_state(ratio)
        fast = k_search.coarse_search(state, 8)[0]
        slow = k_search.brute_force_search(state, 8)
        worst = max(worst, abs(fast.eta - slow.eta))
    return worst, 1e-12, "阶段1 (kmax=8) vs 逐点穷举"


def check_determinism(v: InvariantVerifier):
    settings = v.optimizer_settings.model_copy(update={"sample_count": 40})
    state = states.make_state(0.45)
    first = optimizer.max_violation(state, settings, stream=3).to_dict()
    second = optimizer.max_violation(state, settings, stream=3).to_dict()
    return (0.0 if first == second else 1.0), 0.0, "相同种子两次运行逐位一致"


def check_dominance(v: InvariantVerifier):
    worst = 0.0
    search = SearchSettings(coarse_kmax=12, full_kmax=256, refine_rounds=4)
    for index, ratio in enumerate((0.3, 0.6, 0.9)):
        state = states.make_state(ratio)
        ksearch = k_search.k_search(state, search)
        fixed = [
            chmetrics.ch_q(state, states.hardy_config(state)),
            chmetrics.ch_q(state, states.nm_config(state, 1, 7)),
            chmetrics.ch_q(state, states.nm_config(state, 3, 10)),
            ksearch.report,
        ]
        best_q = optimizer.max_violation(
            state, v.optimizer_settings, stream=index, extra_starts=[ksearch.config]
        )
        best_eta = optimizer.min_eta(
            state, v.optimizer_settings, stream=index, extra_starts=[ksearch.config]
        )
        for report in fixed:
            worst = max(worst, report.q - best_q.q - 1e-9)
            if report.eta_crit is not None:
                worst = max(worst, best_eta.eta_crit - report.eta_crit - 1e-6)
    return max(0.0, worst), 0.0, "maxq/mineta 支配固定测量基族"


def check_certify_maximum(v: InvariantVerifier):
    settings = v.optimizer_settings
    result = optimizer.certify_maximum(states.make_state(1.0), settings, (50, 100, 200))
    return result["spread"], 1e-6, f"maxima={result['maxima']}"


# ============ analytic ============

def _random_points(v: InvariantVerifier, stream: int, count: int, symmetric: bool = False):
    rng = v.rng(stream)
    etas = rng.uniform(0.05, 1.0, count)
    ss = rng.uniform(0.0, 1.0, count)
    ts = ss if symmetric else rng.uniform(0.0, 1.0, count)
    return [AnalyticPoint(float(e), float(s), float(t)) for e, s, t in zip(etas, ss, ts)]


def check_quartic_oracle(v: InvariantVerifier):
    worst = 0.0
    for point in _random_points(v, 10, 500):
        coefficients = analytic.char_quartic(point)
        for lam in np.linalg.eigvalsh(analytic.build_B(point)):
            worst = max(worst, analytic.polynomial_residual(coefficients, lam))
    return worst, 1e-8, "特征多项式在数值本征值处的残差，500点"


def check_cubic_oracle(v: InvariantVerifier):
    worst = 0.0
    for point in _random_points(v, 11, 200, symmetric=True):
        eigen = analytic.reduced_cubic_roots(point.eta, point.t)
        numeric = np.sort(np.linalg.eigvalsh(analytic.build_B(point)))
        closed = np.sort(eigen.as_array())
        worst = max(worst, float(np.max(np.abs(numeric - closed))))
    return worst, 1e-9, "三角法根 ∪ λ4 vs 数值本征值，200点"


def check_symmetric_reduction(v: InvariantVerifier):
    worst = 0.0
    for point in _random_points(v, 12, 200, symmetric=True):
        general = analytic.char_quartic(point)
        reduced = analytic.char_quartic_symmetric(point.eta, point.t)
        worst = max(worst, float(np.max(np.abs(general - reduced))))
        lam4 = analytic.singlet_eigenvalue(point.eta, point.t)
        worst = max(worst, analytic.polynomial_residual(reduced, lam4), lam4)
    return worst, 1e-12, "s = t 约化，λ4 = η²t − η ≤ 0 为根"


def check_symmetry_optimal(v: InvariantVerifier):
    rng = v.rng(13)
    worst = 0.0
    for _ in range(200):
        eta = float(rng.uniform(2.0 / 3.0 + 1e-3, 1.0))
        s, t = (float(x) for x in rng.uniform(0.0, 1.0, 2))
        mid = math.sqrt(s * t)
        lam_asym = np.linalg.eigvalsh(analytic.build_B(AnalyticPoint(eta, s, t)))[-1]
        lam_sym = np.linalg.eigvalsh(analytic.build_B(AnalyticPoint(eta, mid, mid)))[-1]
        worst = max(worst, float(lam_asym - lam_sym))
    return worst, 1e-12, "相同 st 下 s = t 的 λ_max 最大"


def check_unit_efficiency(v: InvariantVerifier):
    t = analytic.optimal_t(1.0)
    return abs(t - 0.5), 1e-10, f"optimal_t(1) = {t!r}"


def check_floor_boundaries(v: InvariantVerifier):
    residual = max(
        abs(analytic.t_quartic_coefficients(2.0 / 3.0)[-1]),
        abs(analytic.stationary_lambda(2.0 / 3.0, 0.0)),
    )
    return residual, 1e-12, "η = 2/3 处常数项与 λ_stat(2/3, 0) 为0"


def check_stationary_consistency(v: InvariantVerifier):
    worst = 0.0
    for eta in (0.8, 0.9, 0.95):
        t = analytic.optimal_t(eta)
        worst = max(worst, abs(analytic.stationary_lambda(eta, t) - analytic.reduced_cubic_roots(eta, t).lambda1))
    return worst, 1e-9, "驻点 λ 与三角法 λ1 一致"


def check_lambda_monotone(v: InvariantVerifier):
    etas = np.linspace(2.0 / 3.0 + 5e-3, 1.0, 40)
    values = [analytic.max_violation_for_eta(e).lambda1 for e in etas]
    worst = float(np.max(np.maximum(0.0, -np.diff(values))))
    non_strict = sum(1 for d in np.diff(values) if d <= 0)
    return worst + non_strict, 0.0, "λ1(η, t*(η)) 严格递增"


def check_frontier_bridge(v: InvariantVerifier):
    settings = v.optimizer_settings.model_copy(update={"sample_count": 1000})
    worst = -math.inf
    for index, eta in enumerate((0.70, 0.75, 0.80, 0.828)):
        state = analytic.max_violation_for_eta(eta).state
        record = optimizer.min_eta(state, settings, stream=index)
        worst = max(worst, record.eta_crit - eta)
    return max(0.0, worst), 2e-3, f"max(η_crit − η) = {worst:.3e}"


# ============ cli ============

def _small_maxq_curve(v: InvariantVerifier):
    settings = v.optimizer_settings.model_copy(update={"sample_count": 20, "max_iterations": 200})
    return sweep([0.25, 0.6, 0.9], StrategySpec(Strategy.MAXQ), settings, workers=1)


def check_csv_roundtrip(v: InvariantVerifier):
    parsed = parse_curve_csv(export_curve_csv(_small_maxq_curve(v)))
    if not parsed.success:
        return math.inf, 1e-12, "; ".join(parsed.errors)
    worst = 0.0
    for row in parsed.rows:
        config = MeasurementConfig.from_angles(
            [row[f"phi{i}"] for i in range(1, 5)],
            [row[f"nu{i}"] for i in range(1, 5)],
        )
        report = chmetrics.ch_q(states.make_state(row["ratio"]), config)
        worst = max(worst, abs(report.q - row["q"]))
        if row["eta_crit"] is not None and report.eta_crit is not None:
            worst = max(worst, abs(report.eta_crit - row["eta_crit"]))
        elif (row["eta_crit"] is None) != (report.eta_crit is None):
            worst = math.inf
    return worst, 1e-12, "由CSV中的 (ratio, φ, ν) 重算 q 与 η_crit"


def check_cache_matches_fresh(v: InvariantVerifier):
    fresh = _small_maxq_curve(v)
    payload = {"seed": v.seed, "check": "cache"}
    with tempfile.TemporaryDirectory() as tmp:
        cache = ResultCache(tmp)
        cache.store(payload, Strategy.MAXQ.value, fresh)
        cached = cache.load(payload, Strategy.MAXQ.value)
    same = cached is not None and export_curve_csv(cached) == export_curve_csv(fresh)
    return (0.0 if same else 1.0), 0.0, "缓存读回与重新计算的CSV逐字节一致"


DEFAULT_CHECKS: List[Tuple[str, CheckFn]] = [
    ("states.resolution_of_identity", check_resolution_of_identity),
    ("states.orthonormality", check_orthonormality),
    ("states.hardy_equals_k1331", check_hardy_equals_k1331),
    ("states.k_weights_monotone", check_k_weights_monotone),
    ("chmetrics.operator_equivalence", check_operator_equivalence),
    ("chmetrics.tsirelson_ceiling", check_tsirelson_ceiling),
    ("chmetrics.eigenvalue_ceiling", check_eigenvalue_ceiling),
    ("chmetrics.probability_bounds", check_probability_bounds),
    ("chmetrics.marginal_trace", check_marginal_trace),
    ("chmetrics.eta_reassembly", check_eta_reassembly),
    ("chmetrics.eberhard_monotone", check_eberhard_monotone),
    ("chmetrics.hardy_zero_conditions", check_hardy_zero_conditions),
    ("optimizer.cg_quadratic_bowl", check_cg_quadratic_bowl),
    ("optimizer.cg_gradient_norm", check_cg_gradient_norm),
    ("optimizer.k_search_oracle", check_k_search_oracle),
    ("optimizer.determinism", check_determinism),
    ("optimizer.dominance", check_dominance),
    ("optimizer.certify_maximum", check_certify_maximum),
    ("analytic.quartic_oracle", check_quartic_oracle),
    ("analytic.cubic_oracle", check_cubic_oracle),
    ("analytic.symmetric_reduction", check_symmetric_reduction),
    ("analytic.symmetry_optimal", check_symmetry_optimal),
    ("analytic.unit_efficiency", check_unit_efficiency),
    ("analytic.floor_boundaries", check_floor_boundaries),
    ("analytic.stationary_consistency", check_stationary_consistency),
    ("analytic.lambda_monotone", check_lambda_monotone),
    ("analytic.frontier_bridge", check_frontier_bridge),
    ("cli.csv_roundtrip", check_csv_roundtrip),
    ("cli.cache_matches_fresh", check_cache_matches_fresh),
]


def run_invariant_suite(seed: int, scale: float = 1.0, sample_count: int = 400) -> VerifyReport:
    """以固定种子执行全部不变量检查"""
    return InvariantVerifier(seed, scale, sample_count).run()
