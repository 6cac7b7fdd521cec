"""
指数空间分阶段搜索
在 (k1, k2, k3, k4) 空间中寻找使 η_crit 最小的广义Hardy基

阶段:
1. 粗网格穷举 [1, coarse_kmax]⁴（按 k1 分块向量化）
2. 从各分块最优点出发做坐标扫描：每次固定三个坐标，
   对剩余坐标在 [1, full_kmax] 全范围取最优；随后做半径2的局部盒搜索。
   最多 refine_rounds 轮，无改进即停止。

排序键: (η_crit 升序, Q 降序, 四元组字典序)；Q ≤ 0 的四元组 η 记为 ∞。
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.models.enums import Objective
from app.models.config_model import SearchSettings
from app.models.result_model import OptimumRecord
from app.models.state_model import SchmidtState, ExponentQuad
from app.core.chmetrics import pair_probability, ch_q
from app.core.states import COS_SIGNS, k_config

logger = logging.getLogger(__name__)

SEEDS_PER_SEARCH = 4
POLISH_RADIUS = 2


@dataclass(frozen=True)
class QuadScore:
    """单个四元组的评分"""

    quad: Tuple[int, int, int, int]
    eta: float
    q: float

    @property
    def key(self) -> Tuple[float, float, Tuple[int, int, int, int]]:
        return (self.eta, -self.q, self.quad)


class ExponentTables:
    """
    给定态下 kᵢ = 1..kmax 的 sinφ 与带符号 cosφ 查找表

    下标 k−1 对应指数 k；列 i 对应第 i+1 个测量方向的符号。
    """

    def __init__(self, state: SchmidtState, kmax: int):
        self.alpha = state.alpha
        self.beta = state.beta
        self.kmax = kmax
        ks = np.arange(1, kmax + 1, dtype=float)
        x = ks * math.log(state.ratio())
        half_log_norm = 0.5 * np.logaddexp(0.0, x)
        self.sin = np.exp(-half_log_norm)
        cos_abs = np.exp(0.5 * x - half_log_norm)
        self.cos = np.stack([sign * cos_abs for sign in COS_SIGNS])

    def evaluate(self, k1, k2, k3, k4) -> Tuple[np.ndarray, np.ndarray]:
        """
        可广播的指数数组 → (η, Q)

        ν = 0，联合概率为 (α a0 b0 + β a1 b1)²。
        """
        a, b = self.alpha, self.beta
        s1, s2, s3, s4 = (self.sin[np.asarray(k) - 1] for k in (k1, k2, k3, k4))
        c1 = self.cos[0][np.asarray(k1) - 1]
        c2 = self.cos[1][np.asarray(k2) - 1]
        c3 = self.cos[2][np.asarray(k3) - 1]
        c4 = self.cos[3][np.asarray(k4) - 1]

        p23 = pair_probability(a, b, s2, c2, s3, c3, 1.0)
        p1t3 = pair_probability(a, b, c1, -s1, s3, c3, 1.0)
        p14 = pair_probability(a, b, s1, c1, s4, c4, 1.0)
        p2t4 = pair_probability(a, b, s2, c2, c4, -s4, 1.0)
        q = p23 - p1t3 - p14 - p2t4
        marginal_sum = a * a * (s2 * s2 + s3 * s3) + b * b * (c2 * c2 + c3 * c3)
        return _eta_or_inf(q, marginal_sum), q


def _eta_or_inf(q: np.ndarray, marginal_sum: np.ndarray) -> np.ndarray:
    positive = q > 0
    safe = np.where(positive, q + marginal_sum, 1.0)
    return np.where(positive, marginal_sum / safe, np.inf)


def _best_index(eta: np.ndarray, q: np.ndarray) -> int:
    """按排序键选出最优元素的平铺下标（C序即字典序）"""
    eta = eta.ravel()
    q = q.ravel()
    best_eta = eta.min()
    tied = eta == best_eta
    best_q = q[tied].max()
    return int(np.argmax(tied & (q == best_q)))


def _score(tables: ExponentTables, quad: Sequence[int]) -> QuadScore:
    eta, q = tables.evaluate(*quad)
    return QuadScore(tuple(int(k) for k in quad), float(eta), float(q))


# ============ 阶段1 ============

def coarse_search(state: SchmidtState, kmax: int, keep: int = 1) -> List[QuadScore]:
    """
    穷举 [1, kmax]⁴

    Args:
        state: 非退化Schmidt态
        kmax: 穷举上限
        keep: 返回的种子数（各 k1 分块最优点中排名前 keep 个）

    Returns:
        按排序键升序排列的 QuadScore 列表
    """
    tables = ExponentTables(state, kmax)
    ks = np.arange(1, kmax + 1)
    k2 = ks[:, None, None]
    k3 = ks[None, :, None]
    k4 = ks[None, None, :]

    block_best: List[QuadScore] = []
    for k1 in range(1, kmax + 1):
        eta, q = tables.evaluate(k1, k2, k3, k4)
        eta, q = np.broadcast_arrays(eta, q)
        flat = _best_index(eta, q)
        j2, j3, j4 = np.unravel_index(flat, eta.shape)
        block_best.append(QuadScore(
            (k1, int(j2) + 1, int(j3) + 1, int(j4) + 1),
            float(eta.ravel()[flat]),
            float(q.ravel()[flat]),
        ))

    block_best.sort(key=lambda s: s.key)
    return block_best[:max(1, keep)]


# ============ 阶段2 ============

def _coordinate_scan(tables: ExponentTables, start: QuadScore) -> QuadScore:
    """依次对每个坐标做全范围扫描"""
    best = start
    ks = np.arange(1, tables.kmax + 1)
    for axis in range(4):
        args = [np.full(ks.shape, k) for k in best.quad]
        args[axis] = ks
        eta, q = tables.evaluate(*args)
        flat = _best_index(eta, q)
        quad = list(best.quad)
        quad[axis] = int(ks[flat])
        candidate = QuadScore(tuple(quad), float(eta[flat]), float(q[flat]))
        if candidate.key < best.key:
            best = candidate
    return best


def _box_polish(tables: ExponentTables, start: QuadScore, radius: int) -> QuadScore:
    """在 start 周围半径 radius 的盒内穷举"""
    ranges = [
        np.arange(max(1, k - radius), min(tables.kmax, k + radius) + 1)
        for k in start.quad
    ]
    grid = np.meshgrid(*ranges, indexing="ij")
    eta, q = tables.evaluate(*grid)
    flat = _best_index(eta, q)
    idx = np.unravel_index(flat, eta.shape)
    quad = tuple(int(g[idx]) for g in grid)
    candidate = QuadScore(quad, float(eta[idx]), float(q[idx]))
    return candidate if candidate.key < start.key else start


def refine(tables: ExponentTables, start: QuadScore, rounds: int) -> QuadScore:
    """坐标扫描 + 局部盒搜索，直到无改进或达到轮数上限"""
    best = start
    for round_index in range(rounds):
        candidate = _box_polish(tables, _coordinate_scan(tables, best), POLISH_RADIUS)
        if not candidate.key < best.key:
            break
        logger.debug("refine round=%d quad=%s eta=%.12g", round_index + 1, candidate.quad, candidate.eta)
        best = candidate
    return best


def k_search(
    state: SchmidtState,
    search: Optional[SearchSettings] = None,
    seeds: Iterable[ExponentQuad] = (),
) -> OptimumRecord:
    """
    分阶段搜索使 η_crit 最小的指数四元组

    Args:
        state: 非退化Schmidt态
        search: 搜索参数
        seeds: 额外的阶段2起点

    Returns:
        目标为 min-eta 的最优记录，附带指数四元组
    """
    search = search or SearchSettings()
    coarse = coarse_search(state, search.coarse_kmax, keep=SEEDS_PER_SEARCH)
    tables = ExponentTables(state, search.full_kmax)

    starts = list(coarse)
    for seed in seeds:
        seed.check_bounds(search.full_kmax)
        starts.append(_score(tables, seed.as_tuple()))

    best = min(starts, key=lambda s: s.key)
    for start in starts:
        candidate = refine(tables, start, search.refine_rounds)
        if candidate.key < best.key:
            best = candidate

    quad = ExponentQuad(*best.quad)
    config = k_config(state, quad, kmax=search.full_kmax)
    report = ch_q(state, config)
    logger.debug(
        "k_search ratio=%.6f coarse=%s best=%s eta=%s q=%.12f",
        state.ratio(), coarse[0].quad, best.quad, report.eta_crit, report.q,
    )
    return OptimumRecord(
        ratio=state.ratio(),
        config=config,
        report=report,
        objective=Objective.MIN_ETA,
        k=quad,
    )


def brute_force_search(state: SchmidtState, kmax: int) -> QuadScore:
    """
    逐个四元组调用 k_config + ch_q 的穷举（独立参照实现）

    仅适用于小 kmax。
    """
    best: Optional[QuadScore] = None
    for quad in itertools.product(range(1, kmax + 1), repeat=4):
        report = ch_q(state, k_config(state, ExponentQuad(*quad)))
        eta = report.eta_crit if report.eta_crit is not None else math.inf
        score = QuadScore(quad, eta, report.q)
        if best is None or score.key < best.key:
            best = score
    return best
