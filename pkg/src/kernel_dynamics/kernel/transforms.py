"""残差连接与归一化层对核映射的作用。"""

from dataclasses import replace

import numpy as np
import structlog

from ..exceptions import DegenerateActivationError, InvalidParameterError
from .kernel_map import KernelMap

logger = structlog.get_logger()

NORM_MODES = ("ln_before", "rn_before", "ln_after", "rn_after")


def _compose(km: KernelMap, step: str) -> str:
    return f"{km.transform}+{step}" if km.transform else step


def residual_transform(km: KernelMap, r: float) -> KernelMap:
    """κ_res(ρ) = (1 - r²) κ(ρ) + r² ρ。

    Args:
        km: 原核映射
        r: 残差强度，0 ≤ r ≤ 1

    Returns:
        新的 KernelMap，系数 (1-r²)c_k²，并在 k=1 处加上 r²
    """
    if not 0.0 <= r <= 1.0:
        raise InvalidParameterError(f"残差强度 r 必须在 [0, 1] 内: {r}")
    if r == 0.0:
        return km
    keep = 1.0 - r * r
    squared = keep * np.asarray(km.squared_coeffs)
    squared[1] += r * r
    return replace(
        km,
        squared_coeffs=squared,
        tail_mass=keep * km.tail_mass,
        dkappa1_quad=keep * km.dkappa1_quad + r * r,
        transform=_compose(km, f"residual(r={r:g})"),
    )


def normalization_transform(km: KernelMap, mode: str) -> KernelMap:
    """归一化层与激活函数的联合核映射。

    只有激活函数之后的 LayerNorm (ln_after) 改变核映射：
    κ_ψ(ρ) = (κ(ρ) - κ(0)) / (1 - κ(0))。其余模式对单位能量的预激活不起作用。
    κ(1) = 1 时 κ_ψ(1) = 1。

    Raises:
        InvalidParameterError: 未知模式
        DegenerateActivationError: κ(0) = 1
    """
    if mode not in NORM_MODES:
        raise InvalidParameterError(f"未知归一化模式: {mode}，可选 {', '.join(NORM_MODES)}")
    if km.kappa0 >= 1.0 - 1e-12:
        raise DegenerateActivationError(f"{km.label}: κ(0) = 1，中心化后为零")
    if mode != "ln_after":
        return km

    denom = 1.0 - km.kappa0
    squared = np.asarray(km.squared_coeffs) / denom
    squared[0] = 0.0
    logger.debug("应用 LayerNorm 核变换", activation=km.label, kappa0=km.kappa0)
    return replace(
        km,
        squared_coeffs=squared,
        tail_mass=km.tail_mass / denom,
        dkappa1_quad=km.dkappa1_quad / denom,
        transform=_compose(km, mode),
    )
