"""
命令行接口包
每个子命令一个模块

子命令:
- curve: 比值网格扫描（curve.py）
- table1: 指数四元组表格复现（table1.py）
- analytic: 解析最大违背前沿（analytic.py）
- verify: 不变量检查套件（verify.py）

退出码: 0 成功；1 计算失败或不变量不成立；2 用法错误；3 I/O错误
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app import __version__
from app.models.enums import Metric, OutputFormat, Strategy
from app.models.exceptions import ChBasesError
from app.utils.validators import validate_run_config
from app.cli import analytic, curve, table1, verify
from app.cli.config import UsageError, build_run_config, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

COMMANDS = {
    "curve": curve.run,
    "table1": table1.run,
    "analytic": analytic.run,
    "verify": verify.run,
}


def _add_common_options(parser: argparse.ArgumentParser):
    """所有子命令共享的参数；未给出的参数不出现在命名空间中"""
    S = argparse.SUPPRESS
    parser.add_argument("--strategy", action="append", choices=[s.value for s in Strategy], default=S,
                        help="曲线策略，可重复")
    parser.add_argument("--n", type=int, default=S, help="(n,m) 族参数 n")
    parser.add_argument("--m", type=int, default=S, help="(n,m) 族参数 m")
    parser.add_argument("--k", default=S, help="指数四元组 a,b,c,d")
    parser.add_argument("--metric", choices=[m.value for m in Metric], default=S, help="绘图指标")
    parser.add_argument("--ratios", default=S, help="比值网格 start:stop:count 或逗号列表")
    parser.add_argument("--eta", default=S, help="效率或效率网格（analytic）")
    parser.add_argument("--seed", type=int, default=S, help="随机种子")
    parser.add_argument("--samples", type=int, default=S, help="多起点数量")
    parser.add_argument("--gradient-step", type=float, default=S, help="有限差分步长")
    parser.add_argument("--tolerance", type=float, default=S, help="梯度范数收敛阈值")
    parser.add_argument("--max-iterations", type=int, default=S, help="CG最大迭代次数")
    parser.add_argument("--kmax-coarse", type=int, default=S, help="指数搜索第一阶段上限")
    parser.add_argument("--kmax", type=int, default=S, help="指数搜索上限")
    parser.add_argument("--refine-rounds", type=int, default=S, help="指数搜索细化轮数")
    parser.add_argument("--out", default=S, help="输出路径")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=S, help="输出格式")
    parser.add_argument("--config", default=S, help="配置文件路径（YAML 或 key = value）")
    parser.add_argument("--cache-dir", default=S, help="结果缓存目录")
    parser.add_argument("--no-cache", action="store_true", default=S, help="禁用结果缓存")
    parser.add_argument("--no-warm-starts", dest="warm_starts", action="store_false", default=S,
                        help="仅使用随机起点")
    parser.add_argument("--tamper-tolerance", type=float, default=S, help="verify 容差倍率（测试用）")
    parser.add_argument("--report", default=S, help="verify JSON报告路径")
    parser.add_argument("--verbose", "-v", action="store_true", default=S, help="DEBUG 日志")


def build_parser() -> argparse.ArgumentParser:
    """构造参数解析器"""
    parser = argparse.ArgumentParser(
        prog="chbases",
        description="CH不等式违背与阈值探测效率的数值分析工具",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "curve": "比值网格扫描，输出 CSV/JSON/SVG",
        "table1": "七个比值上的指数搜索与参考四元组比较",
        "analytic": "效率网格上的解析最大违背",
        "verify": "运行不变量检查套件",
    }
    for name, text in helps.items():
        _add_common_options(subparsers.add_parser(name, help=text, description=text))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行主入口

    Args:
        argv: 参数列表（默认 sys.argv[1:]）

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    flags: Dict[str, Any] = vars(namespace).copy()
    command = flags.pop("command")
    config_path = flags.pop("config", None)
    configure_logging(bool(flags.get("verbose", False)))

    try:
        config = build_run_config(command, flags, config_path)
        ok, errors, warnings = validate_run_config(config)
        for w in warnings:
            logger.warning(w)
        if not ok:
            raise UsageError("; ".join(errors))
        if config.verbose:
            configure_logging(True)
        logger.debug("run config: %s", config.model_dump(mode="json"))
        return COMMANDS[command](config)
    except (UsageError, ValidationError) as e:
        print(f"{parser.prog} {command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ChBasesError as e:
        print(f"{parser.prog} {command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"{parser.prog} {command}: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
