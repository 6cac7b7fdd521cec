"""
比值网格扫描引擎
对每个 α/β 运行选定策略，输出按比值排序的最优记录列表

功能:
- StrategySpec: 策略及其参数（n, m 或指数四元组）
- SweepEngine: 串行/多进程扫描主控
- sweep: 便捷函数

设计要点:
- 记录按比值下标聚合，与执行顺序、进程数无关
- 随机数流编号 = 比值下标，保证并行前后结果逐位一致
- 进程数由环境变量 CHBASES_WORKERS 控制，默认 os.cpu_count()
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

from app.models.enums import Strategy, Objective
from app.models.config_model import OptimizerSettings, SearchSettings
from app.models.exceptions import InvalidExponents, NonPositiveRatio
from app.models.result_model import OptimumRecord
from app.models.state_model import ExponentQuad
from app.core.chmetrics import ch_q
from app.core.k_search import k_search
from app.core.optimizer import max_violation, min_eta
from app.core.states import HARDY_QUAD, make_state, hardy_config, nm_config, k_config

logger = logging.getLogger(__name__)

WORKERS_ENV = "CHBASES_WORKERS"

# 无需进程池的固定测量基族
FIXED_STRATEGIES = {Strategy.HARDY, Strategy.NM, Strategy.K}


@dataclass(frozen=True)
class StrategySpec:
    """
    曲线策略

    Attributes:
        strategy: 策略枚举
        n, m: (n, m) 族参数（仅 NM）
        k: 指数四元组（仅 K）
    """

    strategy: Strategy
    n: int = 3
    m: int = 10
    k: Optional[ExponentQuad] = None

    def __post_init__(self):
        if self.strategy == Strategy.NM and self.n == self.m:
            raise InvalidExponents(f"(n, m) 族要求 n ≠ m，实际 n = m = {self.n}")
        if self.strategy == Strategy.K and self.k is None:
            raise InvalidExponents("策略 k 需要指数四元组")

    @property
    def label(self) -> str:
        """文件名与日志使用的标签"""
        return self.strategy.value


def resolve_workers(requested: Optional[int] = None) -> int:
    """
    确定工作进程数

    优先级: 显式参数 > 环境变量 CHBASES_WORKERS > os.cpu_count()
    """
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("忽略无效的 %s=%r", WORKERS_ENV, env)
    return max(1, os.cpu_count() or 1)


def evaluate_point(
    index: int,
    ratio: float,
    spec: StrategySpec,
    optimizer: OptimizerSettings,
    search: SearchSettings,
) -> OptimumRecord:
    """
    单个比值下执行策略

    Args:
        index: 比值下标（随机数流编号）
        ratio: α/β ∈ (0, 1]
        spec: 策略
        optimizer: 优化参数
        search: 指数搜索参数

    Returns:
        最优记录
    """
    if not 0.0 < ratio <= 1.0:
        raise NonPositiveRatio(f"扫描比值必须在 (0, 1] 内: {ratio!r}")
    state = make_state(ratio)
    strategy = spec.strategy

    if strategy == Strategy.MAXQ:
        return replace(max_violation(state, optimizer, stream=index), ratio=ratio)
    if strategy == Strategy.MINETA:
        return replace(min_eta(state, optimizer, stream=index), ratio=ratio)
    if strategy == Strategy.KSEARCH:
        return replace(k_search(state, search), ratio=ratio)

    if strategy == Strategy.HARDY:
        config, quad = hardy_config(state), HARDY_QUAD
    elif strategy == Strategy.NM:
        config, quad = nm_config(state, spec.n, spec.m), ExponentQuad(spec.n, spec.m, spec.m, spec.n)
    else:
        config, quad = k_config(state, spec.k), spec.k
    return OptimumRecord(
        ratio=ratio,
        config=config,
        report=ch_q(state, config),
        objective=Objective.FIXED,
        k=quad,
    )


def _evaluate_task(task) -> OptimumRecord:
    return evaluate_point(*task)


class SweepEngine:
    """
    扫描主控

    固定测量基族在当前进程串行计算；优化类策略在 workers > 1 时
    通过 ProcessPoolExecutor.map 分发，map 保证结果按提交顺序返回。
    """

    def __init__(
        self,
        spec: StrategySpec,
        optimizer: Optional[OptimizerSettings] = None,
        search: Optional[SearchSettings] = None,
        workers: Optional[int] = None,
    ):
        """
        初始化扫描引擎

        Args:
            spec: 策略
            optimizer: 优化参数
            search: 指数搜索参数
            workers: 进程数（None 时读取环境变量）
        """
        self.spec = spec
        self.optimizer = optimizer or OptimizerSettings()
        self.search = search or SearchSettings()
        self.workers = resolve_workers(workers)

    def run(self, ratios: Sequence[float]) -> List[OptimumRecord]:
        """
        执行扫描

        Args:
            ratios: 比值网格，每个值 ∈ (0, 1]

        Returns:
            与 ratios 顺序一致的记录列表
        """
        ratios = [float(r) for r in ratios]
        for r in ratios:
            if not 0.0 < r <= 1.0:
                raise NonPositiveRatio(f"扫描比值必须在 (0, 1] 内: {r!r}")

        tasks = [
            (i, r, self.spec, self.optimizer, self.search)
            for i, r in enumerate(ratios)
        ]
        parallel = (
            self.workers > 1
            and len(tasks) > 1
            and self.spec.strategy not in FIXED_STRATEGIES
        )
        logger.info(
            "sweep strategy=%s points=%d workers=%d",
            self.spec.label, len(tasks), self.workers if parallel else 1,
        )

        if parallel:
            with ProcessPoolExecutor(max_workers=min(self.workers, len(tasks))) as pool:
                records = list(pool.map(_evaluate_task, tasks))
        else:
            records = [_evaluate_task(t) for t in tasks]

        for record in records:
            logger.debug(
                "ratio=%.6f q=%.10f eta=%s", record.ratio, record.q, record.eta_crit
            )
        return records


def sweep(
    ratios: Sequence[float],
    strategy: StrategySpec,
    optimizer: Optional[OptimizerSettings] = None,
    search: Optional[SearchSettings] = None,
    workers: Optional[int] = None,
) -> List[OptimumRecord]:
    """对比值网格执行单个策略"""
    return SweepEngine(strategy, optimizer, search, workers).run(ratios)
