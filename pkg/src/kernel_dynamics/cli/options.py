"""CLI 公共部分：运行上下文、激活函数参数类型、错误到退出码的映射。"""

import functools
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import click
import pandas as pd
import structlog

from ..activations.catalog import Activation, lookup
from ..exceptions import KernelDynamicsError, NumericalError
from ..kernel.kernel_map import KernelMap, build_kernel_map
from ..kernel.transforms import NORM_MODES, normalization_transform, residual_transform
from ..reporting.export import RunManifest, dumps_json, frame_to_csv, write_csv
from ..reporting.svg import render_lines, write_svg

logger = structlog.get_logger()

ENV_OUT_DIR = "KD_OUT_DIR"
DEFAULT_OUT_DIR = "./kd_output"
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunContext:
    """根命令解析出的全局选项，经 ctx.obj 传给子命令。"""

    seed: int = 0
    K: int = 60
    out_dir: Path = Path(DEFAULT_OUT_DIR)
    fmt: Optional[str] = None
    svg: bool = False

    def path(self, filename: str) -> Path:
        return self.out_dir / filename

    def manifest(self, command: str, config: Dict[str, Any]) -> RunManifest:
        resolved = {"K": self.K, "seed": self.seed, **config}
        return RunManifest(command=command, config=resolved, seed=self.seed)

    def finish(self, manifest: RunManifest, stem: str, started: float) -> Path:
        """写入与本次输出对应的唯一清单文件。"""
        manifest.duration_seconds = round(time.perf_counter() - started, 6)
        return manifest.write(self.path(f"{stem}.manifest.json"))

    def write_frame(self, manifest: RunManifest, frame: pd.DataFrame, stem: str) -> Path:
        path = write_csv(frame, self.path(f"{stem}.csv"))
        manifest.add_output(path)
        return path

    def write_plot(self, manifest: RunManifest, series, stem: str, title: str, logy: bool = False,
                   xlabel: str = "", ylabel: str = "") -> Optional[Path]:
        if not self.svg:
            return None
        svg = render_lines(series, title=title, logy=logy, xlabel=xlabel, ylabel=ylabel)
        path = write_svg(svg, self.path(f"{stem}.svg"))
        manifest.add_output(path)
        return path

    def echo_payload(self, default: str, frame: Optional[pd.DataFrame] = None, payload: Any = None):
        """按 --json/--csv 输出到 stdout。"""
        fmt = self.fmt or default
        if fmt == "csv" and frame is not None:
            click.echo(frame_to_csv(frame), nl=False)
        elif payload is not None:
            click.echo(dumps_json(payload))
        else:
            click.echo(dumps_json(frame.to_dict(orient="records")))


pass_run = click.make_pass_decorator(RunContext, ensure=True)


class ActivationType(click.ParamType):
    """按目录名称解析激活函数，例如 relu、leaky_relu:0.2、hermite:3。"""

    name = "activation"

    def convert(self, value, param, ctx) -> Activation:
        if isinstance(value, Activation):
            return value
        try:
            return lookup(value)
        except KernelDynamicsError as e:
            self.fail(str(e), param, ctx)


ACTIVATION = ActivationType()


def safe_name(name: str) -> str:
    """用作文件名的激活函数名称。"""
    return name.replace(":", "_").replace(".", "p")


def residual_option(func):
    return click.option(
        "--residual", "-r", type=click.FloatRange(0.0, 1.0), default=0.0, show_default=True,
        help="残差强度 r",
    )(func)


def norm_mode_option(func):
    return click.option(
        "--norm-mode", type=click.Choice(NORM_MODES), default=None, help="归一化层位置",
    )(func)


def transformed_map(run: RunContext, act: Activation, residual: float = 0.0,
                    norm_mode: Optional[str] = None) -> KernelMap:
    km = build_kernel_map(act.name, run.K)
    if norm_mode is not None:
        km = normalization_transform(km, norm_mode)
    return residual_transform(km, residual)


def handle_errors(func):
    """把库异常映射为退出码：参数错误 2，数值失败 3。"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NumericalError as e:
            logger.error("数值计算失败", command=func.__name__, error=str(e))
            click.echo(f"数值错误: {e}", err=True)
            click.get_current_context().exit(EXIT_NUMERICAL)
        except KernelDynamicsError as e:
            logger.error("参数错误", command=func.__name__, error=str(e))
            click.echo(f"错误: {e}", err=True)
            click.get_current_context().exit(EXIT_USAGE)

    return wrapper
