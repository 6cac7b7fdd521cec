"""
工具函数包
提供各种辅助功能

模块说明:
- csv_parser.py: 曲线/前沿/Table I 的CSV与JSON读写
- svg_chart.py: SVG折线图
- statistics.py: 曲线峰值与摘要
- validators.py: 网格解析与运行配置验证
- cache.py: 结果缓存
"""

from app.utils.csv_parser import (
    CURVE_HEADERS,
    ANALYTIC_HEADERS,
    TABLE1_HEADERS,
    ParseResult,
    export_curve_csv,
    parse_curve_csv,
    export_curve_json,
    parse_curve_json,
    export_analytic_csv,
    export_table1_csv,
)

from app.utils.svg_chart import SvgChart, Series, render_curves

from app.utils.statistics import CurvePeak, curve_peak, summarize_curve, violation_fraction

from app.utils.validators import (
    DEFAULT_ETA_GRID,
    parse_ratio_grid,
    parse_eta_grid,
    validate_run_config,
)

from app.utils.cache import ResultCache, cache_key

__all__ = [
    # CSV/JSON
    "CURVE_HEADERS",
    "ANALYTIC_HEADERS",
    "TABLE1_HEADERS",
    "ParseResult",
    "export_curve_csv",
    "parse_curve_csv",
    "export_curve_json",
    "parse_curve_json",
    "export_analytic_csv",
    "export_table1_csv",
    # SVG
    "SvgChart",
    "Series",
    "render_curves",
    # 统计
    "CurvePeak",
    "curve_peak",
    "summarize_curve",
    "violation_fraction",
    # 验证
    "DEFAULT_ETA_GRID",
    "parse_ratio_grid",
    "parse_eta_grid",
    "validate_run_config",
    # 缓存
    "ResultCache",
    "cache_key",
]
