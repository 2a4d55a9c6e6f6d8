"""收敛图的数据：每个激活函数四张表，对应四列子图。

1. activation: φ 与 φ' 的采样曲线
2. kernel_map: κ(ρ) 曲线与蛛网点对
3. sequence:   ρ_ℓ 随深度的变化及理论包络
4. distance:   |ρ_ℓ - ρ*| 及理论上界
"""

from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np
import pandas as pd
import structlog

from ..activations.catalog import lookup
from ..dynamics.trajectory import iterate
from ..hermite.expansion import DEFAULT_TRUNCATION
from ..kernel.fixed_point import distance_bound, find_fixed_point
from ..kernel.kernel_map import build_kernel_map

logger = structlog.get_logger()

FIGURE_ACTIVATIONS = ("relu", "exp", "gelu", "tanh", "elu", "celu", "sigmoid", "selu")
LEAKY_SLOPES = (0.01, 0.1, 0.2, 0.5)
DEFAULT_RHO0S = (-0.9, -0.5, 0.0, 0.5, 0.9)
PANELS = ("activation", "kernel_map", "sequence", "distance")
ACTIVATION_RANGE = 4.0
GRID_POINTS = 201


def leaky_sweep_names() -> list:
    return [f"leaky_relu:{slope:g}" for slope in LEAKY_SLOPES]


@dataclass(frozen=True)
class FigureData:
    """一个激活函数的四张数据表。"""

    activation: str
    frames: Dict[str, pd.DataFrame]

    def __getitem__(self, panel: str) -> pd.DataFrame:
        return self.frames[panel]


def figure_data(
    name: str,
    rho0s: Sequence[float] = DEFAULT_RHO0S,
    depth: int = 50,
    K: int = DEFAULT_TRUNCATION,
    grid_points: int = GRID_POINTS,
) -> FigureData:
    """计算一个激活函数的四列图数据。"""
    act = lookup(name)
    km = build_kernel_map(name, K)
    report = find_fixed_point(km)

    x = np.linspace(-ACTIVATION_RANGE, ACTIVATION_RANGE, grid_points)
    activation = pd.DataFrame({"x": x, "phi": act(x), "dphi": act.derivative(x)})

    rho = np.linspace(-1.0, 1.0, grid_points)
    kernel_rows = [
        pd.DataFrame({"kind": "map", "rho0": np.nan, "x": rho, "y": km.evaluate(rho)})
    ]
    sequence_rows, distance_rows = [], []
    for rho0 in rho0s:
        traj = iterate(km, rho0, depth, report=report)
        values = traj.values
        kernel_rows.append(
            pd.DataFrame({"kind": "cobweb", "rho0": rho0, "x": values[:-1], "y": values[1:]})
        )
        ell = np.arange(depth + 1)
        if abs(rho0) < 1.0:
            envelope = np.array([distance_bound(report, rho0, e) for e in ell])
        else:
            envelope = np.full(depth + 1, np.nan)
        sequence_rows.append(
            pd.DataFrame(
                {
                    "ell": ell,
                    "rho0": rho0,
                    "rho": values,
                    "theory_lower": np.clip(report.rho_star - envelope, -1.0, 1.0),
                    "theory_upper": np.clip(report.rho_star + envelope, -1.0, 1.0),
                }
            )
        )
        distance = np.abs(values - report.rho_star)
        with np.errstate(divide="ignore"):
            log_distance = np.where(distance > 0, np.log10(distance), np.nan)
        distance_rows.append(
            pd.DataFrame(
                {
                    "ell": ell,
                    "rho0": rho0,
                    "distance": distance,
                    "log10_distance": log_distance,
                    "bound": envelope,
                }
            )
        )

    logger.debug("图数据完成", activation=name, case=report.case_label, depth=depth)
    return FigureData(
        activation=act.name,
        frames={
            "activation": activation,
            "kernel_map": pd.concat(kernel_rows, ignore_index=True),
            "sequence": pd.concat(sequence_rows, ignore_index=True),
            "distance": pd.concat(distance_rows, ignore_index=True),
        },
    )
