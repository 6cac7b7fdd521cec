"""
table1 命令
在七个比值上运行指数搜索，与已发表的最优指数四元组并列比较
"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from app.models.config_model import RunConfig
from app.models.enums import OutputFormat
from app.models.state_model import ExponentQuad
from app.core.chmetrics import ch_q
from app.core.k_search import k_search
from app.core.states import k_config, make_state, sin_table
from app.utils.csv_parser import export_table1_csv
from app.cli.config import write_output

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT = "table1"


@dataclass(frozen=True)
class TableRow:
    """已发表的一行：比值、四元组与两位小数的 sinφ1..sinφ4"""
    ratio: float
    quad: ExponentQuad
    sines: Tuple[float, float, float, float]


TABLE1_REFERENCE: List[TableRow] = [
    TableRow(0.20, ExponentQuad(1, 4, 4, 1), (0.91, 0.99, 0.99, 0.91)),
    TableRow(0.39, ExponentQuad(1, 6, 4, 2), (0.84, 0.99, 0.98, 0.93)),
    TableRow(0.61, ExponentQuad(2, 8, 8, 2), (0.85, 0.99, 0.99, 0.85)),
    TableRow(0.80, ExponentQuad(4, 15, 16, 4), (0.84, 0.98, 0.98, 0.84)),
    TableRow(0.90, ExponentQuad(4, 46, 23, 12), (0.77, 0.99, 0.95, 0.88)),
    TableRow(0.95, ExponentQuad(3, 133, 39, 31), (0.73, 0.99, 0.93, 0.91)),
    TableRow(0.99, ExponentQuad(11, 1024, 200, 167), (0.72, 0.99, 0.93, 0.91)),
]


def compute_row(row: TableRow, config: RunConfig) -> Dict[str, Any]:
    """
    单行计算

    已发表的四元组作为搜索的额外起点（超出 kmax 时跳过）。

    Returns:
        TABLE1_HEADERS 对应的字典，另含 reference_quad 与 reference_sines
    """
    search = config.search_settings()
    state = make_state(row.ratio)
    seeds = []
    if max(row.quad.as_tuple()) <= search.full_kmax:
        seeds.append(row.quad)
    else:
        logger.warning("ratio=%.2f: 参考四元组 %s 超出 kmax=%d，不作为起点", row.ratio, row.quad, search.full_kmax)

    found = k_search(state, search, seeds=seeds)
    reference = ch_q(state, k_config(state, row.quad))
    reference_sines = sin_table(k_config(state, row.quad))
    if reference_sines != row.sines:
        logger.warning("ratio=%.2f: 参考四元组的 sinφ %s 与表中 %s 不一致", row.ratio, reference_sines, row.sines)

    sines = sin_table(found.config)
    k1, k2, k3, k4 = found.k.as_tuple()
    return {
        "ratio": row.ratio,
        "k1": k1, "k2": k2, "k3": k3, "k4": k4,
        "sin1": sines[0], "sin2": sines[1], "sin3": sines[2], "sin4": sines[3],
        "eta_crit": found.eta_crit,
        "q": found.q,
        "reference_eta": reference.eta_crit,
        "reference_quad": str(row.quad),
        "reference_sines": list(reference_sines),
    }


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.6f}"


def print_table(rows: List[Dict[str, Any]]):
    """stdout 表格"""
    print(f"{'ratio':>6} {'k1,k2,k3,k4':>18} {'sinφ1..sinφ4':>24} {'eta_crit':>10} {'q':>10} {'ref_eta':>10}")
    for r in rows:
        quad = f"{r['k1']},{r['k2']},{r['k3']},{r['k4']}"
        sines = " ".join(f"{r[f'sin{i}']:.2f}" for i in range(1, 5))
        print(
            f"{r['ratio']:>6.2f} {quad:>18} {sines:>24} "
            f"{_fmt(r['eta_crit']):>10} {_fmt(r['q']):>10} {_fmt(r['reference_eta']):>10}"
        )


def run(config: RunConfig) -> int:
    """执行 table1 命令"""
    rows = [compute_row(row, config) for row in TABLE1_REFERENCE]
    print_table(rows)

    if config.format == OutputFormat.JSON:
        path = config.out or f"{DEFAULT_OUTPUT}.json"
        write_output(path, json.dumps({"rows": rows}, indent=2, sort_keys=True) + "\n")
    else:
        path = config.out or f"{DEFAULT_OUTPUT}.csv"
        write_output(path, export_table1_csv(rows))
    return 0
