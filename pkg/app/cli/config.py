"""
运行配置装配
合并内置默认值、配置文件与命令行参数，生成 RunConfig

配置文件:
- 扁平YAML映射，键为长参数名（'-' 换成 '_'）
- 同时接受 "key = value" 行，解析前规范化为 "key: value"
- 优先级: 内置默认值 < 配置文件 < 命令行参数
"""

import logging
import re
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from app.models.config_model import RunConfig

logger = logging.getLogger(__name__)

_KEY_VALUE_LINE = re.compile(r"^(\s*)([A-Za-z_][A-Za-z0-9_-]*)\s*=\s*(.*)$")

# 以字符串形式保存的键（YAML可能把它们解析成数字或列表）
_STRING_KEYS = {"ratios", "eta", "k"}

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageError(Exception):
    """命令行用法错误（退出码2）"""


def normalize_config_text(text: str) -> str:
    """把 "key = value" 行改写为YAML映射行"""
    lines = []
    for line in text.splitlines():
        match = _KEY_VALUE_LINE.match(line)
        if match:
            indent, key, value = match.groups()
            line = f"{indent}{key}: {value}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def load_config_file(path: str) -> Dict[str, Any]:
    """
    读取配置文件

    Args:
        path: 文件路径

    Returns:
        键已规范化（'-' → '_'）的字典

    Raises:
        OSError: 文件无法读取
        UsageError: 内容不是扁平映射或YAML语法错误
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(normalize_config_text(text))
    except yaml.YAMLError as e:
        raise UsageError(f"配置文件 {path} 解析失败: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"配置文件 {path} 必须是键值映射")

    normalized: Dict[str, Any] = {}
    for key, value in data.items():
        name = str(key).replace("-", "_")
        if isinstance(value, dict):
            raise UsageError(f"配置文件 {path}: 键 '{key}' 不能是嵌套映射")
        if name in _STRING_KEYS and value is not None and not isinstance(value, str):
            value = ",".join(str(v) for v in value) if isinstance(value, list) else str(value)
        normalized[name] = value
    return normalized


def build_run_config(command: str, flags: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """
    合并配置来源

    Args:
        command: 子命令
        flags: 命令行上显式给出的参数
        config_path: 配置文件路径（可选）

    Returns:
        RunConfig

    Raises:
        pydantic.ValidationError: 参数越界或组合非法
        UsageError: 配置文件含未知键
    """
    data: Dict[str, Any] = {}
    if config_path:
        file_values = load_config_file(config_path)
        unknown = sorted(set(file_values) - set(RunConfig.model_fields))
        if unknown:
            raise UsageError(f"配置文件 {config_path} 含未知键: {', '.join(unknown)}")
        data.update(file_values)
        logger.debug("loaded %d keys from %s", len(file_values), config_path)
    data.update(flags)
    data["command"] = command
    if config_path:
        data["config"] = config_path
    return RunConfig(**data)


def configure_logging(verbose: bool = False):
    """stderr 单一处理器；--verbose 时为 DEBUG"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_chbases", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._chbases = True
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def write_output(path: str, content: str) -> Path:
    """写文本文件（自动创建父目录）"""
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        f.write(content)
    logger.info("wrote %s", target)
    return target
