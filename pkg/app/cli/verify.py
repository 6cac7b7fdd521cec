"""
verify 命令
以固定种子运行全部不变量检查，任一失败时退出码为1
"""

import json
import logging

from app.models.config_model import RunConfig
from app.core.verifier import InvariantVerifier
from app.cli.config import write_output

logger = logging.getLogger(__name__)


def run(config: RunConfig) -> int:
    """执行 verify 命令"""
    verifier = InvariantVerifier(seed=config.seed, scale=config.tamper_tolerance)
    report = verifier.run()

    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        print(
            f"{mark} {check.name:<36} residual={check.residual:.3e} "
            f"tol={check.tolerance:.3e} ({check.duration:.2f}s)"
        )
    print(f"\n{len(report.checks) - report.failed_count}/{len(report.checks)} passed")

    if config.report:
        write_output(config.report, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")

    if not report.passed:
        logger.error("%d 项不变量检查失败", report.failed_count)
        return 1
    return 0
