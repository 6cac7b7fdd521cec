"""
多起点共轭梯度优化器
在8参数测量空间 (φ1..φ4, ν1..ν4) 上最大化 Q 或最小化 η_crit

功能:
- cg_optimize / cg_optimize_batch: 非线性共轭梯度（Polak–Ribière+），单起点接受标量目标函数
- finite_difference_gradient: 中心差分梯度
- max_violation: 多起点最大化CH违背
- min_eta: 多起点最小化阈值效率
- certify_maximum: 不同样本量下的最大值一致性检查

算法要点:
- 梯度: 中心差分，步长 settings.gradient_step
- 方向: PR+，每8次迭代及非上升方向时重启为梯度方向
- 步长: 回溯线搜索，充分上升条件 f(x+αd) ≥ f(x) + c·α·gᵀd 且严格上升
- 各起点相互独立，整批计算结果与分批/并行方式无关
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from app.models.enums import CGStatus, Objective
from app.models.exceptions import NonFiniteObjective, NoViolationFound
from app.models.config_model import OptimizerSettings
from app.models.result_model import CGResult, OptimumRecord
from app.models.state_model import SchmidtState, MeasurementConfig
from app.core.chmetrics import batch_violation, batch_eta_objective, ch_q
from app.core.states import hardy_config, nm_config

logger = logging.getLogger(__name__)

RESTART_PERIOD = 8
ARMIJO_C = 1e-4
INITIAL_STEP = 0.5
MAX_STEP = 8.0
MAX_BACKTRACKS = 60

# 预热起点使用的 (n, m) 族
WARM_START_FAMILIES = ((1, 7), (3, 10))

_MAX_ITER, _CONVERGED, _STALLED = 0, 1, 2
_STATUS_CODES = (CGStatus.MAX_ITERATIONS, CGStatus.CONVERGED, CGStatus.STALLED)

BatchObjective = Callable[[np.ndarray], np.ndarray]


# ============ 随机数 ============

def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    可拆分的随机数流

    MT19937（移位寄存器族）+ SeedSequence(seed, spawn_key=(stream,))，
    不同比值下标的起点流互不相关。
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.MT19937(sequence))


def random_starts(rng: np.random.Generator, count: int) -> np.ndarray:
    """均匀随机起点：φ ∈ [0, π), ν ∈ [0, 2π)"""
    phis = rng.uniform(0.0, math.pi, size=(count, 4))
    nus = rng.uniform(0.0, 2.0 * math.pi, size=(count, 4))
    return np.hstack([phis, nus])


# ============ 共轭梯度 ============

def _evaluate(objective: BatchObjective, x: np.ndarray) -> np.ndarray:
    values = np.asarray(objective(x), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteObjective("目标函数返回 NaN 或 ∞")
    return values


def finite_difference_gradient(objective: BatchObjective, x: np.ndarray, step: float) -> np.ndarray:
    """
    中心差分梯度

    Args:
        objective: 批量目标函数 (..., d) → (...)
        x: 形状 (N, d)
        step: 差分步长

    Returns:
        形状 (N, d) 的梯度
    """
    n, d = x.shape
    offsets = np.eye(d) * step
    shifted = np.concatenate(
        [x[:, None, :] + offsets[None], x[:, None, :] - offsets[None]], axis=1
    )
    values = _evaluate(objective, shifted)
    return (values[:, :d] - values[:, d:]) / (2.0 * step)


def cg_optimize_batch(
    objective: BatchObjective,
    starts: np.ndarray,
    settings: OptimizerSettings,
) -> List[CGResult]:
    """
    批量共轭梯度（最大化）

    每一行是独立的起点；已收敛或停滞的行不再参与计算。

    Args:
        objective: 批量目标函数，输入 (..., d)，输出 (...)
        starts: 形状 (N, d) 的起点
        settings: 优化参数

    Returns:
        每个起点一个 CGResult

    Raises:
        NonFiniteObjective: 目标函数出现 NaN/∞
    """
    x = np.array(starts, dtype=float, copy=True)
    if x.ndim != 2:
        raise ValueError(f"起点数组必须为二维 (N, d)，实际形状 {x.shape}")
    n_rows = x.shape[0]
    h = settings.gradient_step
    tol = settings.tolerance

    f = _evaluate(objective, x)
    g = finite_difference_gradient(objective, x, h)
    d = g.copy()
    step = np.full(n_rows, INITIAL_STEP)
    iterations = np.zeros(n_rows, dtype=int)
    gnorm = np.linalg.norm(g, axis=1)
    status = np.full(n_rows, _MAX_ITER, dtype=np.int8)

    active = gnorm > tol
    status[~active] = _CONVERGED

    for it in range(settings.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break

        xa, fa, ga, da = x[idx], f[idx], g[idx], d[idx]
        slope = np.einsum("ij,ij->i", ga, da)
        uphill = slope > 0
        if not np.all(uphill):
            da[~uphill] = ga[~uphill]
            slope[~uphill] = np.einsum("ij,ij->i", ga[~uphill], ga[~uphill])

        # 回溯线搜索
        alpha = np.minimum(2.0 * step[idx], MAX_STEP)
        x_new = xa.copy()
        f_new = fa.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        pending = np.arange(idx.size)
        for _ in range(MAX_BACKTRACKS):
            if pending.size == 0:
                break
            trial = xa[pending] + alpha[pending, None] * da[pending]
            f_trial = _evaluate(objective, trial)
            ok = (f_trial > fa[pending]) & (
                f_trial >= fa[pending] + ARMIJO_C * alpha[pending] * slope[pending]
            )
            hit = pending[ok]
            x_new[hit] = trial[ok]
            f_new[hit] = f_trial[ok]
            accepted[hit] = True
            pending = pending[~ok]
            alpha[pending] *= 0.5

        stalled = idx[~accepted]
        status[stalled] = _STALLED
        active[stalled] = False

        moved = idx[accepted]
        if moved.size == 0:
            continue
        loc = np.flatnonzero(accepted)
        g_old = ga[loc]
        g_new = finite_difference_gradient(objective, x_new[loc], h)

        if (it + 1) % RESTART_PERIOD == 0:
            beta = np.zeros(moved.size)
        else:
            denom = np.einsum("ij,ij->i", g_old, g_old)
            numer = np.einsum("ij,ij->i", g_new, g_new - g_old)
            beta = np.maximum(0.0, numer / np.where(denom > 0, denom, 1.0))

        x[moved] = x_new[loc]
        f[moved] = f_new[loc]
        g[moved] = g_new
        d[moved] = g_new + beta[:, None] * da[loc]
        step[moved] = alpha[loc]
        iterations[moved] += 1
        gnorm[moved] = np.linalg.norm(g_new, axis=1)

        done = moved[gnorm[moved] <= tol]
        status[done] = _CONVERGED
        active[done] = False

    return [
        CGResult(
            point=x[i].copy(),
            value=float(f[i]),
            status=_STATUS_CODES[status[i]],
            iterations=int(iterations[i]),
            gradient_norm=float(gnorm[i]),
        )
        for i in range(n_rows)
    ]


ScalarObjective = Callable[[np.ndarray], float]


def as_batch_objective(objective: ScalarObjective) -> BatchObjective:
    """把逐点标量目标函数 f(x) -> float 包装为批量形式 (..., d) -> (...)"""
    def batched(x: np.ndarray) -> np.ndarray:
        return np.apply_along_axis(lambda row: float(objective(row)), -1, x)

    return batched


def cg_optimize(
    objective: Union[ScalarObjective, BatchObjective],
    start: Sequence[float],
    settings: Optional[OptimizerSettings] = None,
    vectorized: bool = False,
) -> CGResult:
    """
    单起点共轭梯度（最大化；求最小值时将目标函数乘以 −1）

    Args:
        objective: 标量目标函数 f(x) -> float，x 为长度 d 的一维数组；
            vectorized=True 时为接受 (..., d) 数组的批量函数
        start: 起点
        settings: 优化参数
        vectorized: 目标函数是否已向量化

    Returns:
        CGResult，可解包为 (point, value)
    """
    settings = settings or OptimizerSettings()
    start = np.asarray(start, dtype=float)
    batch = objective if vectorized else as_batch_objective(objective)
    return cg_optimize_batch(batch, start[None, :], settings)[0]


# ============ 多起点搜索 ============

def warm_start_configs(state: SchmidtState) -> List[MeasurementConfig]:
    """Hardy基与 (1,7)、(3,10) 族作为额外起点"""
    if state.is_degenerate:
        return []
    configs = [hardy_config(state)]
    configs.extend(nm_config(state, n, m) for n, m in WARM_START_FAMILIES)
    return configs


def _build_starts(
    state: SchmidtState,
    settings: OptimizerSettings,
    stream: int,
    extra_starts: Sequence[MeasurementConfig],
) -> np.ndarray:
    rng = make_rng(settings.seed, stream)
    starts = [random_starts(rng, settings.sample_count)]
    named = list(extra_starts)
    if settings.warm_starts:
        named = warm_start_configs(state) + named
    if named:
        starts.append(np.vstack([c.to_vector() for c in named]))
    return np.vstack(starts)


def _status_summary(results: List[CGResult]) -> dict:
    summary = {s.value: 0 for s in CGStatus}
    for r in results:
        summary[r.status.value] += 1
    return summary


def max_violation(
    state: SchmidtState,
    settings: Optional[OptimizerSettings] = None,
    stream: int = 0,
    extra_starts: Sequence[MeasurementConfig] = (),
) -> OptimumRecord:
    """
    多起点最大化CH违背量 Q

    Args:
        state: Schmidt态
        settings: 优化参数
        stream: 随机数流编号（扫描中为比值下标）
        extra_starts: 追加的命名起点

    Returns:
        目标为 max-Q 的最优记录
    """
    settings = settings or OptimizerSettings()
    alpha, beta = state.alpha, state.beta

    def objective(x):
        return batch_violation(alpha, beta, x)[0]

    starts = _build_starts(state, settings, stream, extra_starts)
    results = cg_optimize_batch(objective, starts, settings)
    best = max(range(len(results)), key=lambda i: (results[i].value, -i))
    config = MeasurementConfig.from_vector(results[best].point)
    report = ch_q(state, config)

    logger.debug(
        "max_violation alpha=%.6f starts=%d best_q=%.12f status=%s",
        alpha, len(results), report.q, _status_summary(results),
    )
    return OptimumRecord(
        ratio=_ratio_or_inf(state),
        config=config,
        report=report,
        objective=Objective.MAX_Q,
    )


def min_eta(
    state: SchmidtState,
    settings: Optional[OptimizerSettings] = None,
    stream: int = 0,
    extra_starts: Sequence[MeasurementConfig] = (),
) -> OptimumRecord:
    """
    多起点最小化阈值效率 η_crit

    Q ≤ 0 的区域目标值为 1 + |Q|。

    Raises:
        NoViolationFound: 所有起点最终均 Q ≤ 0
    """
    settings = settings or OptimizerSettings()
    alpha, beta = state.alpha, state.beta

    def objective(x):
        return -batch_eta_objective(alpha, beta, x)

    starts = _build_starts(state, settings, stream, extra_starts)
    results = cg_optimize_batch(objective, starts, settings)
    best = max(range(len(results)), key=lambda i: (results[i].value, -i))
    if -results[best].value >= 1.0:
        raise NoViolationFound(
            f"α/β={_ratio_or_inf(state)!r}: {len(results)} 个起点均未找到 Q > 0 的配置"
        )

    config = MeasurementConfig.from_vector(results[best].point)
    report = ch_q(state, config)
    if report.eta_crit is None:
        raise NoViolationFound(f"α/β={_ratio_or_inf(state)!r}: 最优点 Q ≤ 0")

    logger.debug(
        "min_eta alpha=%.6f starts=%d best_eta=%.12f status=%s",
        alpha, len(results), report.eta_crit, _status_summary(results),
    )
    return OptimumRecord(
        ratio=_ratio_or_inf(state),
        config=config,
        report=report,
        objective=Objective.MIN_ETA,
    )


def certify_maximum(
    state: SchmidtState,
    settings: Optional[OptimizerSettings] = None,
    sample_sizes: Sequence[int] = (1_000, 10_000, 100_000),
) -> dict:
    """
    以递增样本量重复最大化，报告各最大值与离散度

    Returns:
        {"maxima": {样本量: q}, "spread": max − min}
    """
    settings = settings or OptimizerSettings()
    maxima = {}
    for size in sample_sizes:
        run = settings.model_copy(update={"sample_count": int(size)})
        maxima[int(size)] = max_violation(state, run).q
    values = list(maxima.values())
    spread = max(values) - min(values)
    logger.info("certify_maximum maxima=%s spread=%.3e", maxima, spread)
    return {"maxima": maxima, "spread": spread}


def _ratio_or_inf(state: SchmidtState) -> float:
    return state.ratio() if state.beta > 0 else math.inf
