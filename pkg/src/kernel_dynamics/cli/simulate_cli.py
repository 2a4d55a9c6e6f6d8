"""有限宽度蒙特卡洛仿真命令。"""

import time

import click
import structlog

from ..simulation.config import WEIGHT_DISTS, SimConfig
from ..simulation.runner import run as run_simulation
from ..reporting.svg import frame_series
from .options import (
    ACTIVATION,
    RunContext,
    handle_errors,
    norm_mode_option,
    pass_run,
    residual_option,
    safe_name,
)

logger = structlog.get_logger()


@click.command("simulate")
@click.argument("activation", type=ACTIVATION)
@click.option("--width", "-d", type=click.IntRange(min=2), default=1024, show_default=True, help="宽度 d")
@click.option("--depth", "-L", type=click.IntRange(min=1), default=10, show_default=True, help="层数 L")
@click.option("--rho0", type=click.FloatRange(-1.0, 1.0), default=0.5, show_default=True)
@click.option("--trials", "-M", type=click.IntRange(min=1), default=32, show_default=True)
@click.option("--weights", "weight_dist", type=click.Choice(WEIGHT_DISTS), default="gaussian",
              show_default=True, help="权重分布")
@click.option("--n-jobs", type=int, default=1, show_default=True, help="joblib 并行数")
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def simulate(run: RunContext, activation, width, depth, rho0, trials, weight_dist, n_jobs,
             residual, norm_mode):
    """随机网络的经验核序列，与平均场迭代对照。"""
    started = time.perf_counter()
    config = SimConfig(
        activation=activation.name,
        width=width,
        depth=depth,
        rho0=rho0,
        trials=trials,
        weight_dist=weight_dist,
        residual=residual,
        norm_mode=norm_mode,
        seed=run.seed,
        K=run.K,
    )
    result = run_simulation(config, n_jobs=n_jobs)
    frame = result.to_frame()

    stem = f"simulate_{safe_name(activation.name)}"
    manifest = run.manifest("simulate", config.to_dict())
    run.write_frame(manifest, frame, stem)
    run.write_plot(
        manifest,
        frame_series(frame, "layer", "mean_kernel") + frame_series(frame, "layer", "meanfield_kernel"),
        stem, title=f"{activation.name} width={width}", xlabel="layer", ylabel="kernel",
    )
    run.finish(manifest, stem, started)
    if not result.within_tolerance():
        logger.warning("经验均值偏离平均场", activation=activation.name, max_gap=float(result.gap.max()))
    run.echo_payload("csv", frame=frame)
