"""动力学模块 - 离散核序列、核 ODE 与收敛类型判别。"""

from .trajectory import Trajectory, bound_series, cobweb, iterate, iterate_gap_to_one
from .ode import DEFAULT_DT, DEFAULT_T_MAX, EARLY_STOP_TOL, ode_solve, rk4_step
from .regime import DecayFit, classify_regime, decay_fit

__all__ = [
    "DEFAULT_DT",
    "DEFAULT_T_MAX",
    "EARLY_STOP_TOL",
    "DecayFit",
    "Trajectory",
    "bound_series",
    "classify_regime",
    "cobweb",
    "decay_fit",
    "iterate",
    "iterate_gap_to_one",
    "ode_solve",
    "rk4_step",
]
