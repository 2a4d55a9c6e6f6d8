"""核 ODE dρ/dt = κ(ρ) - ρ 的经典四阶 Runge-Kutta 积分。"""

import math
from typing import Optional

import numpy as np
import structlog

from ..exceptions import IntegrationError, InvalidParameterError
from ..kernel.kernel_map import KernelMap, check_rho
from .trajectory import SOURCE_ODE, Trajectory

logger = structlog.get_logger()

DEFAULT_DT = 0.01
DEFAULT_T_MAX = 500.0
EARLY_STOP_TOL = 1e-12
RANGE_TOL = 1e-9
FLAG_RANGE_EXIT = "range_exit"


def _rhs(km: KernelMap, rho: float) -> float:
    return km.evaluate(rho) - rho


def rk4_step(km: KernelMap, rho: float, h: float) -> float:
    """一步经典 RK4。"""
    k1 = _rhs(km, rho)
    k2 = _rhs(km, rho + 0.5 * h * k1)
    k3 = _rhs(km, rho + 0.5 * h * k2)
    k4 = _rhs(km, rho + h * k3)
    return rho + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def ode_solve(
    km: KernelMap,
    rho0: float,
    t_max: float = DEFAULT_T_MAX,
    dt: float = DEFAULT_DT,
    early_stop: bool = True,
    early_stop_tol: float = EARLY_STOP_TOL,
) -> Trajectory:
    """积分核 ODE。

    状态越出 [-1, 1] 超过 1e-9 时截回区间并加 "range_exit" 标记。

    Args:
        km: 核映射
        rho0: 初始核
        t_max: 积分终点
        dt: 步长
        early_stop: |dρ/dt| < early_stop_tol 时提前结束

    Raises:
        IntegrationError: 状态出现非有限值
    """
    rho0 = float(check_rho(rho0, "rho0"))
    if not dt > 0:
        raise InvalidParameterError(f"步长 dt 必须为正: {dt}")
    if not t_max >= 0:
        raise InvalidParameterError(f"t_max 必须非负: {t_max}")

    n_steps = int(math.ceil(t_max / dt - 1e-9))
    times = [0.0]
    values = [rho0]
    range_exit = False
    t, rho = 0.0, rho0
    for i in range(n_steps):
        if early_stop and abs(_rhs(km, rho)) < early_stop_tol:
            logger.debug("ODE 提前结束", activation=km.label, t=t, rho=rho)
            break
        h = min(dt, t_max - t)
        nxt = rk4_step(km, rho, h)
        if not np.isfinite(nxt):
            raise IntegrationError(f"{km.label}: ODE 状态在 t={t:g} 之后出现非有限值", last_t=t)
        if abs(nxt) > 1.0 + RANGE_TOL:
            if not range_exit:
                logger.warning("ODE 状态越出 [-1, 1]", activation=km.label, t=t + h, rho=nxt)
            range_exit = True
            nxt = float(np.clip(nxt, -1.0, 1.0))
        t = (i + 1) * dt if i + 1 < n_steps else t_max
        rho = nxt
        times.append(t)
        values.append(rho)

    return Trajectory(
        name=km.label,
        rho0=rho0,
        steps=np.asarray(times),
        values=np.asarray(values),
        bounds=np.full(len(values), np.nan),
        bound_functional=None,
        source=SOURCE_ODE,
        flags=(FLAG_RANGE_EXIT,) if range_exit else (),
    )
