"""多次独立试验的并行执行与聚合，以及平均场参照序列。"""

import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
import structlog
from joblib import Parallel, delayed

from ..dynamics.trajectory import iterate
from ..exceptions import DegenerateTrialError, InvalidParameterError, SimulationError
from ..kernel.kernel_map import KernelMap, build_kernel_map
from ..kernel.transforms import normalization_transform, residual_transform
from .config import SimConfig
from .network import ForwardRecord, forward, make_input_pair

logger = structlog.get_logger()

MAX_DEGENERATE_FRACTION = 0.01
MEANFIELD_SLACK = 0.02


@dataclass(frozen=True, eq=False)
class SimResult:
    """M 次试验聚合后的逐层统计量（长度 L+1，第 0 层为输入）。"""

    config: SimConfig
    mean_kernel: np.ndarray
    stderr: np.ndarray
    mean_norm_x: np.ndarray
    mean_norm_y: np.ndarray
    meanfield: np.ndarray
    n_valid: int
    n_degenerate: int = 0
    duration: float = 0.0

    @property
    def gap(self) -> np.ndarray:
        """|经验均值 - 平均场|。"""
        return np.abs(self.mean_kernel - self.meanfield)

    def within_tolerance(self, n_stderr: float = 3.0, slack: float = MEANFIELD_SLACK) -> bool:
        """每层都满足 |mean - mean-field| ≤ n_stderr·stderr + slack。"""
        return bool(np.all(self.gap <= n_stderr * self.stderr + slack))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "layer": np.arange(len(self.mean_kernel)),
                "mean_kernel": self.mean_kernel,
                "stderr": self.stderr,
                "meanfield_kernel": self.meanfield,
                "mean_norm_x": self.mean_norm_x,
                "mean_norm_y": self.mean_norm_y,
            }
        )


def transformed_kernel_map(config: SimConfig) -> KernelMap:
    """与网络结构对应的核映射：先归一化变换，再残差变换。"""
    km = build_kernel_map(config.activation, config.K)
    if config.norm_mode is not None:
        km = normalization_transform(km, config.norm_mode)
    return residual_transform(km, config.residual)


def meanfield_trajectory(config: SimConfig) -> np.ndarray:
    return iterate(transformed_kernel_map(config), config.rho0, config.depth).values


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """第 trial 次试验的独立随机流，只由 (seed, trial) 决定。"""
    return np.random.default_rng([seed, trial])


def _run_trial(config: SimConfig, trial: int) -> Optional[ForwardRecord]:
    rng = trial_rng(config.seed, trial)
    x, y = make_input_pair(config.width, config.rho0, rng)
    try:
        return forward(config, x, y, rng)
    except DegenerateTrialError as e:
        logger.warning("丢弃退化试验", trial=trial, activation=config.activation, reason=str(e))
        return None


def run(config: SimConfig, n_jobs: int = 1) -> SimResult:
    """执行 M 次独立试验并与平均场迭代比较。

    结果只依赖 (config, seed)，与并行度无关：每次试验的随机流由试验编号派生，
    聚合按试验编号顺序进行。

    Args:
        config: 仿真配置
        n_jobs: joblib 并行进程数

    Raises:
        SimulationError: 退化试验超过 1%
    """
    start = time.perf_counter()
    logger.info(
        "开始蒙特卡洛仿真",
        activation=config.activation,
        width=config.width,
        depth=config.depth,
        trials=config.trials,
        weight_dist=config.weight_dist,
    )
    meanfield = meanfield_trajectory(config)

    records = Parallel(n_jobs=n_jobs)(
        delayed(_run_trial)(config, trial) for trial in range(config.trials)
    )
    valid = [r for r in records if r is not None]
    n_degenerate = len(records) - len(valid)
    if n_degenerate > MAX_DEGENERATE_FRACTION * config.trials or not valid:
        raise SimulationError(
            f"退化试验过多: {n_degenerate}/{config.trials}",
            diagnostics={"n_degenerate": n_degenerate, "trials": config.trials},
        )

    kernels = np.stack([r.kernels for r in valid])
    delta = 3.0 / np.sqrt(config.width)
    if np.any(np.abs(kernels) > 1.0 + delta):
        logger.warning("经验核超出有限宽度允许范围", activation=config.activation, delta=delta)

    n = len(valid)
    stderr = kernels.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(kernels.shape[1])
    result = SimResult(
        config=config,
        mean_kernel=kernels.mean(axis=0),
        stderr=stderr,
        mean_norm_x=np.mean([r.norms_x for r in valid], axis=0),
        mean_norm_y=np.mean([r.norms_y for r in valid], axis=0),
        meanfield=meanfield,
        n_valid=n,
        n_degenerate=n_degenerate,
        duration=time.perf_counter() - start,
    )
    logger.info(
        "仿真完成",
        activation=config.activation,
        max_gap=float(np.max(result.gap)),
        duration=round(result.duration, 3),
    )
    return result


def width_sweep(config: SimConfig, widths: Sequence[int], n_jobs: int = 1) -> pd.DataFrame:
    """不同宽度下，各层平均的 |mean - mean-field|。"""
    if not widths:
        raise InvalidParameterError("widths 不能为空")
    rows = []
    for width in widths:
        result = run(replace(config, width=int(width)), n_jobs=n_jobs)
        rows.append(
            {
                "width": int(width),
                "mean_gap": float(np.mean(result.gap[1:])),
                "max_stderr": float(np.max(result.stderr)),
            }
        )
    return pd.DataFrame(rows)
