"""
analytic 命令
对效率网格求解最大违背：(eta, t*, lambda1, ratio)
"""

import json
import logging

from app.models.config_model import RunConfig
from app.models.enums import OutputFormat
from app.core.analytic import analytic_frontier
from app.utils.csv_parser import export_analytic_csv
from app.utils.validators import DEFAULT_ETA_GRID, parse_eta_grid
from app.cli.config import UsageError, write_output

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT = "analytic"


def run(config: RunConfig) -> int:
    """执行 analytic 命令"""
    ok, etas, errors, warnings = parse_eta_grid(config.eta or DEFAULT_ETA_GRID)
    if not ok:
        raise UsageError("; ".join(errors))
    for w in warnings:
        logger.warning(w)

    points = analytic_frontier(etas)
    for p in points:
        print(f"eta={p.eta:.6f} t={p.t:.12f} lambda1={p.lambda1:.12f} ratio={p.ratio:.12f}")

    if config.format == OutputFormat.JSON:
        path = config.out or f"{DEFAULT_OUTPUT}.json"
        payload = {
            "rows": [p.to_row() for p in points],
            "eigenvalues": [p.eigen.to_dict() for p in points],
        }
        write_output(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        write_output(config.out or f"{DEFAULT_OUTPUT}.csv", export_analytic_csv(points))
    return 0
