"""
结果缓存
以运行配置的内容哈希为键，将曲线记录保存为JSON文件

键 = sha256(规范化JSON(cache_payload + 策略标签))；
命中时返回的记录与重新计算的结果逐位一致（浮点数以 repr 往返）。
"""

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from app.models.result_model import OptimumRecord

logger = logging.getLogger(__name__)

CACHE_VERSION = 1


def cache_key(payload: Dict[str, Any], label: str) -> str:
    """内容哈希键"""
    canonical = json.dumps(
        {"version": CACHE_VERSION, "label": label, "payload": payload},
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ResultCache:
    """
    JSON文件缓存

    Attributes:
        directory: 缓存目录
        enabled: 是否启用
    """

    def __init__(self, directory: str, enabled: bool = True):
        self.directory = Path(directory)
        self.enabled = enabled

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, payload: Dict[str, Any], label: str) -> Optional[List[OptimumRecord]]:
        """
        读取缓存

        文件缺失、损坏或禁用缓存时返回 None。
        """
        if not self.enabled:
            return None
        path = self._path(cache_key(payload, label))
        if not path.is_file():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            records = [OptimumRecord.from_dict(d) for d in data["records"]]
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.warning("忽略损坏的缓存文件 %s: %s", path, e)
            return None
        logger.info("cache hit %s (%s, %d points)", path.name, label, len(records))
        return records

    def store(self, payload: Dict[str, Any], label: str, records: List[OptimumRecord]) -> Optional[Path]:
        """
        写入缓存（先写临时文件再原子替换）

        写入失败只记录警告，不影响主流程。
        """
        if not self.enabled:
            return None
        path = self._path(cache_key(payload, label))
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps({"label": label, "records": [r.to_dict() for r in records]}, sort_keys=True),
                encoding="utf-8",
            )
            os.replace(tmp, path)
        except OSError as e:
            logger.warning("缓存写入失败 %s: %s", path, e)
            return None
        logger.debug("cache store %s", path.name)
        return path
