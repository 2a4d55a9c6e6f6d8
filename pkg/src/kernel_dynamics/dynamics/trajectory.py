"""离散核序列：不动点迭代、蛛网图数据和 1-ρ 的无抵消迭代。"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
import structlog

from ..exceptions import InvalidParameterError, KernelDynamicsError
from ..kernel.fixed_point import FixedPointReport, contraction_bound, find_fixed_point
from ..kernel.kernel_map import KernelMap, check_rho

logger = structlog.get_logger()

SOURCE_DISCRETE = "discrete"
SOURCE_ODE = "ode"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """核序列 ρ_0..ρ_L（或 ODE 的采样点）以及对应的理论上界。

    Attributes:
        name: 核映射标签
        rho0: 初始核
        steps: 深度 ℓ（离散）或时间 t（ODE）
        values: 序列值
        bounds: 每一步的理论上界，不适用时为 NaN
        bound_functional: 上界所约束的距离泛函名称
        source: "discrete" 或 "ode"
        flags: 诊断标记，例如 "range_exit"
    """

    name: str
    rho0: float
    steps: np.ndarray
    values: np.ndarray
    bounds: np.ndarray
    bound_functional: Optional[str] = None
    source: str = SOURCE_DISCRETE
    flags: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.values)

    @property
    def final(self) -> float:
        return float(self.values[-1])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "ell_or_t": self.steps,
                "rho": self.values,
                "bound": self.bounds,
                "functional_name": self.bound_functional or "",
            }
        )


def _report_or_none(km: KernelMap, report: Optional[FixedPointReport]) -> Optional[FixedPointReport]:
    if report is not None:
        return report
    try:
        return find_fixed_point(km)
    except KernelDynamicsError as e:
        # 线性映射没有定理上界
        logger.debug("跳过理论上界", activation=km.label, reason=str(e))
        return None


def bound_series(report: Optional[FixedPointReport], rho0: float, depth: int):
    """ℓ = 0..depth 的 contraction_bound 序列；不适用时全部为 NaN。"""
    if report is None or not abs(rho0) < 1.0:
        return None, np.full(depth + 1, np.nan)
    bounds = [contraction_bound(report, rho0, ell) for ell in range(depth + 1)]
    return bounds[0].functional, np.array([b.value for b in bounds])


def iterate(
    km: KernelMap,
    rho0: float,
    depth: int,
    report: Optional[FixedPointReport] = None,
) -> Trajectory:
    """ρ_{ℓ+1} = κ(ρ_ℓ)，共 depth+1 个值，并附上理论上界。

    Args:
        km: 核映射
        rho0: 初始核，|ρ0| ≤ 1
        depth: 层数 L ≥ 0
        report: 已有的不动点报告，缺省时现场计算
    """
    rho0 = float(check_rho(rho0, "rho0"))
    if depth < 0:
        raise InvalidParameterError(f"深度必须非负: {depth}")

    values = np.empty(depth + 1)
    values[0] = rho0
    for ell in range(depth):
        values[ell + 1] = km.evaluate(values[ell])

    functional, bounds = bound_series(_report_or_none(km, report), rho0, depth)
    return Trajectory(
        name=km.label,
        rho0=rho0,
        steps=np.arange(depth + 1),
        values=values,
        bounds=bounds,
        bound_functional=functional,
        source=SOURCE_DISCRETE,
    )


def cobweb(km: KernelMap, rho0: float, steps: int) -> List[Tuple[float, float]]:
    """蛛网图用的 (ρ_ℓ, ρ_{ℓ+1}) 点对。"""
    values = iterate(km, rho0, steps, report=None).values
    return [(float(a), float(b)) for a, b in zip(values[:-1], values[1:])]


def iterate_gap_to_one(km: KernelMap, gap0: float, depth: int) -> np.ndarray:
    """迭代 x_ℓ = 1 - ρ_ℓ，避免 1 - κ(ρ) 的相消误差。

    取 κ(1) = 1，x ↦ Σ_{k≥1} c_k² (1 - (1-x)^k)，其中 1 - (1-x)^k 用
    -expm1(k·log1p(-x)) 计算，使远小于 1e-16 的距离仍可表示。
    """
    if not 0.0 <= gap0 <= 2.0:
        raise InvalidParameterError(f"gap0 = 1 - rho0 必须在 [0, 2] 内: {gap0}")
    if depth < 0:
        raise InvalidParameterError(f"深度必须非负: {depth}")

    squared = np.asarray(km.squared_coeffs)[1:]
    k = np.arange(1, len(squared) + 1)
    gaps = np.empty(depth + 1)
    gaps[0] = gap0
    for ell in range(depth):
        x = gaps[ell]
        if x < 1.0:
            terms = -np.expm1(k * np.log1p(-x))
        else:
            terms = 1.0 - np.power(1.0 - x, k)
        gaps[ell + 1] = float(np.dot(squared, terms))
    return gaps
