"""蒙特卡洛仿真模块 - 有限宽度随机网络与平均场核序列的比较。"""

from .config import WEIGHT_DISTS, SimConfig
from .network import (
    ForwardRecord,
    avg_inner,
    forward,
    layer_norm,
    make_input_pair,
    propagate,
    rms_norm,
    sample_weights,
)
from .runner import SimResult, meanfield_trajectory, run, transformed_kernel_map, trial_rng, width_sweep

__all__ = [
    "WEIGHT_DISTS",
    "ForwardRecord",
    "SimConfig",
    "SimResult",
    "avg_inner",
    "forward",
    "layer_norm",
    "make_input_pair",
    "meanfield_trajectory",
    "propagate",
    "rms_norm",
    "run",
    "sample_weights",
    "transformed_kernel_map",
    "trial_rng",
    "width_sweep",
]
