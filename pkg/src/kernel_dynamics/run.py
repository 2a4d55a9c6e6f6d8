from pathlib import Path

import click

from . import __version__
from .cli import (
    analyze,
    cobweb_cmd,
    depth_threshold_cmd,
    figure_cmd,
    iterate_cmd,
    ode_cmd,
    simulate,
    table,
)
from .cli.options import DEFAULT_OUT_DIR, ENV_OUT_DIR, RunContext
from .log_utils import configure_structlog


@click.group()
@click.version_option(__version__, prog_name="kernel_dynamics")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True, help="随机种子")
@click.option("--K", "K", type=click.IntRange(min=1), default=60, show_default=True,
              help="Hermite 截断阶数")
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path),
              envvar=ENV_OUT_DIR, default=DEFAULT_OUT_DIR, show_default=True, help="输出目录")
@click.option("--json", "fmt", flag_value="json", default=None, help="stdout 输出 JSON")
@click.option("--csv", "fmt", flag_value="csv", help="stdout 输出 CSV")
@click.option("--svg", is_flag=True, help="同时输出 SVG 折线图")
@click.option("--log-level", envvar="LOG_LEVEL", default="WARNING", show_default=True,
              help="日志级别")
@click.pass_context
def main(ctx, seed, K, out_dir, fmt, svg, log_level):
    """KernelDynamics - 激活函数核映射、不动点与深层核序列分析工具。"""
    try:
        configure_structlog(log_level)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--log-level")
    ctx.obj = RunContext(seed=seed, K=K, out_dir=out_dir, fmt=fmt, svg=svg)


# 添加子命令
main.add_command(analyze, name="analyze")
main.add_command(table, name="table")
main.add_command(iterate_cmd, name="iterate")
main.add_command(cobweb_cmd, name="cobweb")
main.add_command(ode_cmd, name="ode")
main.add_command(simulate, name="simulate")
main.add_command(depth_threshold_cmd, name="depth-threshold")
main.add_command(figure_cmd, name="figure")


def run_entry():
    """程序入口点。"""
    main()
