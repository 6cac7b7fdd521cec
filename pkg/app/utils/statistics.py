"""
曲线统计工具
提供扫描结果的汇总分析功能

功能:
- 曲线峰值定位（q 最大 / η_crit 最小）
- 曲线综合摘要（供CLI日志与验收脚本使用）
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from app.models.enums import Metric
from app.models.result_model import OptimumRecord


@dataclass(frozen=True)
class CurvePeak:
    """
    曲线极值点

    Attributes:
        ratio: 极值所在比值
        value: 极值
        index: 在曲线中的下标
    """
    ratio: float
    value: float
    index: int

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "value": self.value, "index": self.index}


def curve_peak(records: Sequence[OptimumRecord], metric: Metric = Metric.Q) -> Optional[CurvePeak]:
    """
    定位曲线极值

    metric=q 取 Q 的最大值；metric=eta 取 η_crit 的最小值（跳过无违背点）。
    并列时取比值较小者。

    Args:
        records: 最优记录
        metric: 指标

    Returns:
        CurvePeak；无有效点时为 None
    """
    best: Optional[CurvePeak] = None
    for i, record in enumerate(records):
        if metric == Metric.ETA:
            if record.eta_crit is None:
                continue
            value = record.eta_crit
            better = best is None or value < best.value
        else:
            value = record.q
            better = best is None or value > best.value
        if better:
            best = CurvePeak(record.ratio, value, i)
    return best


def violation_fraction(records: Sequence[OptimumRecord]) -> float:
    """Q > 0 的点所占比例"""
    if not records:
        return 0.0
    return sum(1 for r in records if r.q > 0) / len(records)


def summarize_curve(records: Sequence[OptimumRecord]) -> Dict[str, Any]:
    """
    曲线摘要

    Returns:
        {
            "points": 点数,
            "ratio_range": [最小比值, 最大比值],
            "q_peak": {ratio, value, index} | None,
            "eta_min": {ratio, value, index} | None,
            "violation_fraction": Q > 0 的比例,
        }
    """
    q_peak = curve_peak(records, Metric.Q)
    eta_min = curve_peak(records, Metric.ETA)
    ratios: List[float] = [r.ratio for r in records]
    return {
        "points": len(records),
        "ratio_range": [min(ratios), max(ratios)] if ratios else [math.nan, math.nan],
        "q_peak": q_peak.to_dict() if q_peak else None,
        "eta_min": eta_min.to_dict() if eta_min else None,
        "violation_fraction": violation_fraction(records),
    }
