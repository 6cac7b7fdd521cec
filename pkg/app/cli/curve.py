"""
curve 命令
对比值网格运行一个或多个策略，输出曲线文件

输出:
- csv/json: 每个策略一个文件；多策略时为 <stem>_<strategy><ext>
- svg: 一张折线图（每个策略一条折线）+ 对应的CSV数据文件
"""

import logging
from pathlib import Path
from typing import Dict, List

from app.models.config_model import RunConfig
from app.models.enums import OutputFormat, Strategy
from app.models.result_model import OptimumRecord
from app.models.state_model import ExponentQuad
from app.core.sweep import StrategySpec, FIXED_STRATEGIES, sweep
from app.utils.cache import ResultCache
from app.utils.csv_parser import export_curve_csv, export_curve_json
from app.utils.statistics import summarize_curve
from app.utils.svg_chart import render_curves
from app.utils.validators import parse_ratio_grid
from app.cli.config import UsageError, write_output

logger = logging.getLogger(__name__)

DEFAULT_STEM = "curve"


def _unique(strategies: List[Strategy]) -> List[Strategy]:
    seen = []
    for s in strategies:
        if s not in seen:
            seen.append(s)
    return seen


def strategy_spec(config: RunConfig, strategy: Strategy) -> StrategySpec:
    """由运行配置构造单个策略"""
    quad = ExponentQuad.parse(config.k) if config.k else None
    return StrategySpec(strategy=strategy, n=config.n, m=config.m, k=quad)


def compute_curve(config: RunConfig, strategy: Strategy, ratios: List[float]) -> List[OptimumRecord]:
    """
    计算单个策略的曲线（优化类策略读写缓存）
    """
    spec = strategy_spec(config, strategy)
    cache = ResultCache(config.cache_dir, enabled=not config.no_cache and strategy not in FIXED_STRATEGIES)
    payload = config.cache_payload()
    payload["strategy"] = [strategy.value]
    payload.pop("metric", None)

    records = cache.load(payload, spec.label)
    if records is None:
        records = sweep(ratios, spec, config.optimizer_settings(), config.search_settings())
        cache.store(payload, spec.label, records)

    summary = summarize_curve(records)
    logger.info(
        "strategy=%s points=%d q_peak=%s eta_min=%s",
        spec.label, summary["points"], summary["q_peak"], summary["eta_min"],
    )
    return records


def _data_paths(config: RunConfig, strategies: List[Strategy], suffix: str) -> Dict[Strategy, str]:
    """每个策略的数据文件路径"""
    base = Path(config.out) if config.out else Path(f"{DEFAULT_STEM}{suffix}")
    stem = base.with_suffix("")
    if len(strategies) == 1:
        return {strategies[0]: str(base)}
    return {s: str(stem.parent / f"{stem.name}_{s.value}{suffix}") for s in strategies}


def run(config: RunConfig) -> int:
    """
    执行 curve 命令

    Returns:
        退出码
    """
    ok, ratios, errors, warnings = parse_ratio_grid(config.ratios)
    if not ok:
        raise UsageError("; ".join(errors))
    for w in warnings:
        logger.warning(w)

    strategies = _unique(config.strategy)
    curves: Dict[Strategy, List[OptimumRecord]] = {
        s: compute_curve(config, s, ratios) for s in strategies
    }

    if config.format == OutputFormat.JSON:
        for s, path in _data_paths(config, strategies, ".json").items():
            meta = {"strategy": s.value, "seed": config.seed, "ratios": config.ratios}
            write_output(path, export_curve_json(curves[s], meta))
        return 0

    if config.format == OutputFormat.SVG:
        svg_path = config.out or f"{DEFAULT_STEM}.svg"
        write_output(svg_path, render_curves(curves, config.metric))
        csv_config = config.model_copy(update={"out": str(Path(svg_path).with_suffix(".csv"))})
        paths = _data_paths(csv_config, strategies, ".csv")
    else:
        paths = _data_paths(config, strategies, ".csv")

    for s, path in paths.items():
        write_output(path, export_curve_csv(curves[s]))
    return 0
