"""
CSV/JSON读写工具
提供曲线、解析前沿与 Table I 结果的导出与读回

功能:
- 曲线CSV导出/解析（浮点数用 repr 保证逐位可复现，None 写为空单元格）
- 曲线JSON导出/解析
- 解析前沿CSV导出
- Table I CSV导出
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from app.models.result_model import FrontierPoint, OptimumRecord


# 曲线CSV表头
CURVE_HEADERS = [
    "ratio",
    "q",
    "eta_crit",
    "phi1", "phi2", "phi3", "phi4",
    "nu1", "nu2", "nu3", "nu4",
    "k1", "k2", "k3", "k4",
]

# 解析前沿CSV表头
ANALYTIC_HEADERS = ["eta", "t", "lambda1", "ratio"]

# Table I CSV表头
TABLE1_HEADERS = [
    "ratio",
    "k1", "k2", "k3", "k4",
    "sin1", "sin2", "sin3", "sin4",
    "eta_crit",
    "q",
    "reference_eta",
]


@dataclass
class ParseResult:
    """曲线CSV解析结果"""
    success: bool
    rows: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)


def _cell(value: Any) -> str:
    """单元格格式：None → 空，float → repr"""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_rows(headers: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_cell(row.get(h)) for h in headers])
    return output.getvalue()


def export_curve_csv(records: Sequence[OptimumRecord]) -> str:
    """
    导出曲线为CSV字符串

    Args:
        records: 按比值排序的最优记录

    Returns:
        CSV内容字符串（表头 + 每个比值一行）
    """
    return _write_rows(CURVE_HEADERS, [r.to_row() for r in records])


def parse_curve_csv(content: str) -> ParseResult:
    """
    解析曲线CSV内容

    空单元格解析为 None，k 列解析为整数。

    Args:
        content: CSV文件内容字符串

    Returns:
        ParseResult解析结果
    """
    result = ParseResult(success=False)
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames != CURVE_HEADERS:
        result.errors.append(f"表头不匹配: {reader.fieldnames}")
        return result

    for row_num, row in enumerate(reader, start=2):
        try:
            parsed: Dict[str, Any] = {}
            for name in CURVE_HEADERS:
                text = row[name].strip()
                if not text:
                    parsed[name] = None
                elif name.startswith("k"):
                    parsed[name] = int(text)
                else:
                    parsed[name] = float(text)
            result.rows.append(parsed)
        except (TypeError, ValueError) as e:
            result.errors.append(f"第{row_num}行解析错误: {e}")

    result.success = not result.errors
    return result


def export_curve_json(records: Sequence[OptimumRecord], meta: Optional[Dict[str, Any]] = None) -> str:
    """
    导出曲线为JSON字符串

    Args:
        records: 最优记录
        meta: 附加元数据（策略、种子等）

    Returns:
        键排序、缩进2的JSON字符串
    """
    payload = {
        "meta": meta or {},
        "columns": CURVE_HEADERS,
        "rows": [r.to_row() for r in records],
        "records": [r.to_dict() for r in records],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_curve_json(content: str) -> List[OptimumRecord]:
    """解析 export_curve_json 的输出"""
    payload = json.loads(content)
    return [OptimumRecord.from_dict(d) for d in payload["records"]]


def export_analytic_csv(points: Sequence[FrontierPoint]) -> str:
    """导出解析前沿 eta,t,lambda1,ratio"""
    return _write_rows(ANALYTIC_HEADERS, [p.to_row() for p in points])


def export_table1_csv(rows: Sequence[Dict[str, Any]]) -> str:
    """导出 Table I 复现结果"""
    return _write_rows(TABLE1_HEADERS, rows)
