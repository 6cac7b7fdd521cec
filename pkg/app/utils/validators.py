"""
数据验证工具
提供命令行输入的验证与解析功能

功能:
- 比值网格解析（"start:stop:count" 或逗号列表）
- 效率网格解析（analytic命令）
- 运行配置一致性验证
"""

import math
from typing import List, Tuple

import numpy as np

from app.models.config_model import RunConfig
from app.models.enums import OutputFormat, Strategy, Metric
from app.core.analytic import ETA_FLOOR

MAX_GRID_POINTS = 100_000
DEFAULT_ETA_GRID = "0.67:1:34"


def _parse_grid(text: str, name: str) -> Tuple[List[float], List[str]]:
    """
    解析 "start:stop:count" 或 "a,b,c" 形式的网格

    Returns:
        (数值列表, 错误列表)
    """
    errors: List[str] = []
    text = (text or "").strip()
    if not text:
        return [], [f"{name} 网格为空"]

    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            return [], [f"{name} 网格格式应为 start:stop:count，实际为 '{text}'"]
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError:
            return [], [f"{name} 网格无法解析: '{text}'"]
        if count < 1 or count > MAX_GRID_POINTS:
            return [], [f"{name} 网格点数必须在 1-{MAX_GRID_POINTS} 之间，实际为 {count}"]
        if count == 1:
            if start != stop:
                errors.append(f"{name} 网格只有1个点时 start 与 stop 必须相等")
            values = [start]
        else:
            values = [float(v) for v in np.linspace(start, stop, count)]
    else:
        values = []
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                values.append(float(token))
            except ValueError:
                errors.append(f"{name} 网格中的值无法解析: '{token}'")
    if not values and not errors:
        errors.append(f"{name} 网格为空")
    return values, errors


def parse_ratio_grid(text: str) -> Tuple[bool, List[float], List[str], List[str]]:
    """
    解析比值网格

    每个值必须为 (0, 1] 内的有限数；返回值按升序排列。

    Args:
        text: "start:stop:count" 或逗号列表

    Returns:
        (是否有效, 升序比值列表, 错误列表, 警告列表)
    """
    values, errors = _parse_grid(text, "ratio")
    warnings: List[str] = []
    for v in values:
        if not math.isfinite(v) or not 0.0 < v <= 1.0:
            errors.append(f"比值 {v!r} 不在 (0, 1] 内")
    if errors:
        return False, [], errors, warnings

    ordered = sorted(values)
    if ordered != values:
        warnings.append("比值网格未按升序给出，已重新排序")
    if len(set(ordered)) != len(ordered):
        warnings.append("比值网格包含重复值")
    return True, ordered, errors, warnings


def parse_eta_grid(text: str) -> Tuple[bool, List[float], List[str], List[str]]:
    """
    解析效率网格

    每个值必须在 (2/3, 1] 内（解析分析的有效区间）。

    Returns:
        (是否有效, 效率列表（保持输入顺序）, 错误列表, 警告列表)
    """
    values, errors = _parse_grid(text, "eta")
    warnings: List[str] = []
    for v in values:
        if not math.isfinite(v) or not ETA_FLOOR < v <= 1.0:
            errors.append(f"效率 {v!r} 不在 (2/3, 1] 内")
    if errors:
        return False, [], errors, warnings
    return True, values, errors, warnings


def validate_run_config(config: RunConfig) -> Tuple[bool, List[str], List[str]]:
    """
    验证运行配置中 pydantic 字段约束之外的组合规则

    检查内容:
    - 比值网格（curve命令）与效率网格（analytic命令）
    - metric=k 仅对带指数的策略有意义
    - 输出格式与输出路径
    - verify 命令的容差倍率

    Args:
        config: 运行配置

    Returns:
        (是否有效, 错误列表, 警告列表)
    """
    errors: List[str] = []
    warnings: List[str] = []

    if config.command == "curve":
        _, _, grid_errors, grid_warnings = parse_ratio_grid(config.ratios)
        errors.extend(grid_errors)
        warnings.extend(grid_warnings)
        if config.metric == Metric.K and not any(
            s in (Strategy.HARDY, Strategy.NM, Strategy.K, Strategy.KSEARCH) for s in config.strategy
        ):
            errors.append("metric=k 需要至少一个带指数四元组的策略（hardy/nm/k/ksearch）")
        if len(set(config.strategy)) != len(config.strategy):
            warnings.append("策略列表包含重复项")

    if config.command == "analytic":
        _, _, eta_errors, eta_warnings = parse_eta_grid(config.eta or DEFAULT_ETA_GRID)
        errors.extend(eta_errors)
        warnings.extend(eta_warnings)

    if config.format == OutputFormat.SVG and config.command != "curve":
        errors.append(f"{config.command} 命令不支持 svg 输出")

    if config.command == "verify" and config.tamper_tolerance <= 0:
        warnings.append("tamper_tolerance ≤ 0：所有检查将强制失败")

    if config.samples < 100 and config.command == "curve" and any(
        s in (Strategy.MAXQ, Strategy.MINETA) for s in config.strategy
    ):
        warnings.append(f"samples={config.samples} 过小，最优值可能偏低")

    return len(errors) == 0, errors, warnings
