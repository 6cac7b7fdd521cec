"""
枚举定义
包含系统中使用的所有枚举类型

枚举类:
- Strategy: 曲线生成策略（hardy/nm/k/ksearch/maxq/mineta）
- Objective: 优化目标标签
- Metric: 绘图纵轴指标
- OutputFormat: 输出格式
- CGStatus: 共轭梯度终止状态
"""

from enum import Enum


class Strategy(str, Enum):
    """
    曲线生成策略枚举

    Values:
        HARDY: Hardy测量基
        NM: (n, m) 广义Hardy基
        K: 固定指数四元组 (k1..k4)
        KSEARCH: 指数空间分阶段搜索（最小化η_crit）
        MAXQ: 8参数多起点CG，最大化Q
        MINETA: 8参数多起点CG，最小化η_crit
    """
    HARDY = "hardy"
    NM = "nm"
    K = "k"
    KSEARCH = "ksearch"
    MAXQ = "maxq"
    MINETA = "mineta"


class Objective(str, Enum):
    """
    优化目标标签

    Values:
        MAX_Q: 最大化CH违背量
        MIN_ETA: 最小化阈值效率
        FIXED: 固定测量基族（无优化）
    """
    MAX_Q = "max-Q"
    MIN_ETA = "min-eta"
    FIXED = "fixed"


class Metric(str, Enum):
    """
    绘图纵轴指标

    Values:
        Q: CH违背量
        ETA: 阈值探测效率
        K: 指数系数 k1..k4
    """
    Q = "q"
    ETA = "eta"
    K = "k"


class OutputFormat(str, Enum):
    """输出格式"""
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class CGStatus(str, Enum):
    """
    共轭梯度终止状态

    Values:
        CONVERGED: 梯度范数 ≤ tolerance
        STALLED: 线搜索在最小步长下仍无法满足充分上升条件（数值驻点）
        MAX_ITERATIONS: 达到最大迭代次数
    """
    CONVERGED = "converged"
    STALLED = "stalled"
    MAX_ITERATIONS = "max-iterations"


# ============ 策略元数据（绘图用） ============

STRATEGY_META = {
    Strategy.HARDY: {"label": "Hardy bases", "color": "#10B981", "dash": "8,4"},
    Strategy.NM: {"label": "(n,m) bases", "color": "#EF4444", "dash": "2,3"},
    Strategy.K: {"label": "k bases", "color": "#111827", "dash": "8,3,2,3"},
    Strategy.KSEARCH: {"label": "optimal k bases", "color": "#EC4899", "dash": ""},
    Strategy.MAXQ: {"label": "max Q (CG)", "color": "#3B82F6", "dash": ""},
    Strategy.MINETA: {"label": "min eta (CG)", "color": "#DC2626", "dash": ""},
}

EXPONENT_COLORS = ("#3B82F6", "#EF4444", "#10B981", "#EC4899")


def get_strategy_info(strategy: Strategy) -> dict:
    """
    获取策略的绘图信息

    Args:
        strategy: 策略枚举值

    Returns:
        包含图例标签、颜色、虚线样式的字典
    """
    return STRATEGY_META.get(strategy, {
        "label": str(strategy),
        "color": "#000000",
        "dash": "",
    })
