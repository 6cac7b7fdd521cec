"""
核心计算模块包
包含CH不等式违背计算与优化的核心组件

模块说明:
- states.py: Schmidt态、测量基与广义Hardy基族
- chmetrics.py: 联合/边缘概率、Q、η_crit、CH算符
- optimizer.py: 批量共轭梯度与多起点搜索（max-Q / min-eta）
- k_search.py: 指数四元组分阶段搜索
- sweep.py: 比值网格扫描（多进程）
- analytic.py: 效率加权CH算符的解析特征值分析
- verifier.py: 不变量检查套件
"""

from app.core.states import (
    make_state,
    basis_vectors,
    reduced_state,
    exponent_weights,
    k_config,
    hardy_config,
    nm_config,
    sin_table,
    HARDY_QUAD,
)
from app.core.chmetrics import (
    joint_probability,
    marginal_probability,
    ch_operator,
    ch_q,
    eta_crit,
    eberhard_margin,
    hardy_fraction,
    TSIRELSON_CH,
)
from app.core.optimizer import cg_optimize, max_violation, min_eta, certify_maximum
from app.core.k_search import k_search, coarse_search, brute_force_search
from app.core.sweep import StrategySpec, SweepEngine, sweep
from app.core.analytic import (
    build_B,
    char_quartic,
    reduced_cubic_roots,
    stationary_lambda,
    optimal_t,
    max_violation_for_eta,
    analytic_frontier,
)
from app.core.verifier import InvariantVerifier, run_invariant_suite

__all__ = [
    # 态与测量基
    "make_state",
    "basis_vectors",
    "reduced_state",
    "exponent_weights",
    "k_config",
    "hardy_config",
    "nm_config",
    "sin_table",
    "HARDY_QUAD",
    # CH量
    "joint_probability",
    "marginal_probability",
    "ch_operator",
    "ch_q",
    "eta_crit",
    "eberhard_margin",
    "hardy_fraction",
    "TSIRELSON_CH",
    # 优化
    "cg_optimize",
    "max_violation",
    "min_eta",
    "certify_maximum",
    "k_search",
    "coarse_search",
    "brute_force_search",
    # 扫描
    "StrategySpec",
    "SweepEngine",
    "sweep",
    # 解析
    "build_B",
    "char_quartic",
    "reduced_cubic_roots",
    "stationary_lambda",
    "optimal_t",
    "max_violation_for_eta",
    "analytic_frontier",
    # 检查
    "InvariantVerifier",
    "run_invariant_suite",
]
