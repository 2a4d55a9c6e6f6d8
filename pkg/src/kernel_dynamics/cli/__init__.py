"""CLI 模块 - 命令行接口。"""

from .dynamics_cli import cobweb_cmd, figure_cmd, iterate_cmd, ode_cmd
from .kernel_cli import analyze, depth_threshold_cmd, table
from .simulate_cli import simulate

__all__ = [
    "analyze",
    "cobweb_cmd",
    "depth_threshold_cmd",
    "figure_cmd",
    "iterate_cmd",
    "ode_cmd",
    "simulate",
    "table",
]
