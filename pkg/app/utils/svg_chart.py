"""
SVG折线图生成
不依赖绘图库，直接拼接SVG文本

功能:
- SvgChart: 坐标轴、刻度、图例与折线
- render_curves: 按指标（q / eta / k）绘制多策略曲线
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from app.models.enums import Metric, Strategy, EXPONENT_COLORS, get_strategy_info
from app.models.result_model import OptimumRecord

Point = Tuple[float, float]

AXIS_LABELS = {
    Metric.Q: "Q",
    Metric.ETA: "eta_crit",
    Metric.K: "k",
}


@dataclass
class Series:
    """一条折线（points 中的 None 段会断开折线）"""
    label: str
    color: str
    dash: str = ""
    points: List[Optional[Point]] = field(default_factory=list)


def _nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    """1-2-5 步长的刻度"""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    magnitude = 10 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    value = start
    while value <= hi + 1e-12 * step:
        ticks.append(round(value, 12))
        value += step
    return ticks


class SvgChart:
    """
    折线图

    Attributes:
        width, height: 画布尺寸（像素）
        title: 标题
        x_label, y_label: 坐标轴标签
        series: 折线列表
    """

    MARGIN_LEFT = 70
    MARGIN_RIGHT = 180
    MARGIN_TOP = 40
    MARGIN_BOTTOM = 50

    def __init__(self, title: str, x_label: str, y_label: str, width: int = 800, height: int = 500):
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.width = width
        self.height = height
        self.series: List[Series] = []

    def add_series(self, series: Series):
        self.series.append(series)

    def _bounds(self) -> Tuple[float, float, float, float]:
        xs = [p[0] for s in self.series for p in s.points if p is not None]
        ys = [p[1] for s in self.series for p in s.points if p is not None]
        if not xs:
            return 0.0, 1.0, 0.0, 1.0
        y_lo, y_hi = min(ys), max(ys)
        pad = 0.05 * (y_hi - y_lo) if y_hi > y_lo else 0.5
        return min(xs), max(xs), y_lo - pad, y_hi + pad

    def render(self) -> str:
        """生成完整SVG文档"""
        x_lo, x_hi, y_lo, y_hi = self._bounds()
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0
        plot_w = self.width - self.MARGIN_LEFT - self.MARGIN_RIGHT
        plot_h = self.height - self.MARGIN_TOP - self.MARGIN_BOTTOM

        def sx(x: float) -> float:
            return self.MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

        def sy(y: float) -> float:
            return self.MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

        parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="#ffffff"/>',
            f'<text x="{self.width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
            f'font-size="16">{escape(self.title)}</text>',
            f'<rect x="{self.MARGIN_LEFT}" y="{self.MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
            'fill="none" stroke="#333333" stroke-width="1"/>',
        ]

        # 刻度
        for x in _nice_ticks(x_lo, x_hi):
            px = sx(x)
            parts.append(
                f'<line x1="{px:.2f}" y1="{self.MARGIN_TOP + plot_h}" x2="{px:.2f}" '
                f'y2="{self.MARGIN_TOP + plot_h + 5}" stroke="#333333"/>'
            )
            parts.append(
                f'<text x="{px:.2f}" y="{self.MARGIN_TOP + plot_h + 18}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{x:g}</text>'
            )
        for y in _nice_ticks(y_lo, y_hi):
            py = sy(y)
            parts.append(
                f'<line x1="{self.MARGIN_LEFT - 5}" y1="{py:.2f}" x2="{self.MARGIN_LEFT}" '
                f'y2="{py:.2f}" stroke="#333333"/>'
            )
            parts.append(
                f'<text x="{self.MARGIN_LEFT - 8}" y="{py + 4:.2f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{y:g}</text>'
            )

        # 坐标轴标签
        parts.append(
            f'<text x="{self.MARGIN_LEFT + plot_w / 2:.1f}" y="{self.height - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{escape(self.x_label)}</text>'
        )
        parts.append(
            f'<text x="18" y="{self.MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" transform="rotate(-90 18 '
            f'{self.MARGIN_TOP + plot_h / 2:.1f})">{escape(self.y_label)}</text>'
        )

        # 折线
        for s in self.series:
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            for segment in _segments(s.points):
                coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in segment)
                parts.append(
                    f'<polyline points="{coords}" fill="none" stroke="{s.color}" '
                    f'stroke-width="1.5"{dash}/>'
                )

        # 图例
        legend_x = self.MARGIN_LEFT + plot_w + 15
        for i, s in enumerate(self.series):
            ly = self.MARGIN_TOP + 10 + 20 * i
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            parts.append(
                f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 30}" y2="{ly}" '
                f'stroke="{s.color}" stroke-width="2"{dash}/>'
            )
            parts.append(
                f'<text x="{legend_x + 36}" y="{ly + 4}" font-family="sans-serif" '
                f'font-size="12">{escape(s.label)}</text>'
            )

        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def _segments(points: Sequence[Optional[Point]]) -> List[List[Point]]:
    """按 None 断开为连续段"""
    segments: List[List[Point]] = []
    current: List[Point] = []
    for p in points:
        if p is None:
            if current:
                segments.append(current)
            current = []
        else:
            current.append(p)
    if current:
        segments.append(current)
    return segments


def render_curves(curves: Dict[Strategy, Sequence[OptimumRecord]], metric: Metric) -> str:
    """
    绘制多策略曲线

    Args:
        curves: 策略 → 按比值排序的记录
        metric: q 绘制 Q；eta 绘制 η_crit（无违背处断开）；
                k 绘制带指数四元组策略的 k1..k4

    Returns:
        SVG文档字符串
    """
    chart = SvgChart(
        title=f"{AXIS_LABELS[metric]} vs alpha/beta",
        x_label="alpha/beta",
        y_label=AXIS_LABELS[metric],
    )
    for strategy, records in curves.items():
        info = get_strategy_info(strategy)
        if metric == Metric.K:
            if not any(r.k is not None for r in records):
                continue
            for i, color in enumerate(EXPONENT_COLORS):
                chart.add_series(Series(
                    label=f"{info['label']} k{i + 1}",
                    color=color,
                    dash=info["dash"],
                    points=[
                        (r.ratio, float(r.k.as_tuple()[i])) if r.k is not None else None
                        for r in records
                    ],
                ))
            continue
        if metric == Metric.Q:
            points = [(r.ratio, r.q) for r in records]
        else:
            points = [(r.ratio, r.eta_crit) if r.eta_crit is not None else None for r in records]
        chart.add_series(Series(info["label"], info["color"], info["dash"], points))
    return chart.render()
