"""CSV / JSON 导出与运行清单 (RunManifest)。"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd
import structlog

from .. import __version__

logger = structlog.get_logger()

PathLike = Union[str, Path]
CSV_LINE_TERMINATOR = "\r\n"


def to_builtin(obj: Any) -> Any:
    """json.dump 的 default 钩子，转换 numpy 类型与 Path。"""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        value = float(obj)
        return None if not np.isfinite(value) else value
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"无法序列化类型 {type(obj).__name__}")


def _finite_or_none(obj: Any) -> Any:
    # JSON 没有 NaN/Infinity
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_none(v) for v in obj]
    return obj


def dumps_json(payload: Any) -> str:
    return json.dumps(_finite_or_none(payload), indent=2, ensure_ascii=False, default=to_builtin)


def frame_to_csv(frame: pd.DataFrame) -> str:
    """带表头、CRLF 换行的 CSV 文本。"""
    return frame.to_csv(index=False, lineterminator=CSV_LINE_TERMINATOR)


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator=CSV_LINE_TERMINATOR)
    logger.debug("写入 CSV", path=str(path), rows=len(frame))
    return path


def write_json(payload: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload) + "\n", encoding="utf-8")
    logger.debug("写入 JSON", path=str(path))
    return path


def load_schema(name: str) -> Dict[str, Any]:
    """读取随包发布的 JSON Schema，例如 "run_manifest"。"""
    text = resources.files("kernel_dynamics.schemas").joinpath(f"{name}.schema.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


@dataclass
class RunManifest:
    """一次命令运行的清单：命令、完整配置、版本、种子、输出文件和耗时。"""

    command: str
    config: Dict[str, Any]
    seed: int
    outputs: List[str] = field(default_factory=list)
    duration_seconds: float = 0.0
    version: str = __version__

    def add_output(self, path: PathLike) -> None:
        self.outputs.append(str(path))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "version": self.version,
            "seed": self.seed,
            "outputs": list(self.outputs),
            "duration_seconds": self.duration_seconds,
        }

    def write(self, path: PathLike) -> Path:
        return write_json(self.to_dict(), path)
