"""核序列相关命令：iterate、cobweb、ode、figure。"""

import time

import click
import pandas as pd
import structlog

from ..dynamics.ode import DEFAULT_DT, DEFAULT_T_MAX, ode_solve
from ..dynamics.trajectory import cobweb, iterate
from ..reporting.figure import (
    DEFAULT_RHO0S,
    FIGURE_ACTIVATIONS,
    PANELS,
    figure_data,
    leaky_sweep_names,
)
from ..reporting.svg import frame_series
from .options import (
    ACTIVATION,
    RunContext,
    handle_errors,
    norm_mode_option,
    pass_run,
    residual_option,
    safe_name,
    transformed_map,
)

logger = structlog.get_logger()

RHO = click.FloatRange(-1.0, 1.0)


@click.command("iterate")
@click.argument("activation", type=ACTIVATION)
@click.option("--rho0", type=RHO, required=True, help="初始核 ρ0")
@click.option("--depth", type=click.IntRange(min=0), default=50, show_default=True, help="层数 L")
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def iterate_cmd(run: RunContext, activation, rho0, depth, residual, norm_mode):
    """精确核序列 ρ_{ℓ+1} = κ(ρ_ℓ)，附理论上界。"""
    started = time.perf_counter()
    traj = iterate(transformed_map(run, activation, residual, norm_mode), rho0, depth)
    frame = traj.to_frame()

    stem = f"iterate_{safe_name(activation.name)}"
    manifest = run.manifest(
        "iterate",
        {"activation": activation.name, "rho0": rho0, "depth": depth,
         "residual": residual, "norm_mode": norm_mode},
    )
    run.write_frame(manifest, frame, stem)
    run.write_plot(manifest, frame_series(frame, "ell_or_t", "rho"), stem,
                   title=f"{traj.name} kernel sequence", xlabel="depth", ylabel="rho")
    run.finish(manifest, stem, started)
    run.echo_payload("csv", frame=frame)


@click.command("cobweb")
@click.argument("activation", type=ACTIVATION)
@click.option("--rho0", type=RHO, required=True, help="初始核 ρ0")
@click.option("--steps", type=click.IntRange(min=0), default=20, show_default=True)
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def cobweb_cmd(run: RunContext, activation, rho0, steps, residual, norm_mode):
    """蛛网图点对 (ρ_ℓ, ρ_{ℓ+1})。"""
    started = time.perf_counter()
    pairs = cobweb(transformed_map(run, activation, residual, norm_mode), rho0, steps)
    frame = pd.DataFrame(pairs, columns=["rho", "rho_next"])
    frame.insert(0, "step", range(len(frame)))

    stem = f"cobweb_{safe_name(activation.name)}"
    manifest = run.manifest(
        "cobweb",
        {"activation": activation.name, "rho0": rho0, "steps": steps,
         "residual": residual, "norm_mode": norm_mode},
    )
    run.write_frame(manifest, frame, stem)
    run.write_plot(manifest, frame_series(frame, "rho", "rho_next"), stem,
                   title=f"{activation.name} cobweb", xlabel="rho", ylabel="kappa(rho)")
    run.finish(manifest, stem, started)
    run.echo_payload("csv", frame=frame)


@click.command("ode")
@click.argument("activation", type=ACTIVATION)
@click.option("--rho0", type=RHO, required=True, help="初始核 ρ0")
@click.option("--t-max", type=click.FloatRange(min=0.0), default=DEFAULT_T_MAX, show_default=True)
@click.option("--dt", type=click.FloatRange(min=0.0, min_open=True), default=DEFAULT_DT,
              show_default=True)
@click.option("--early-stop/--no-early-stop", default=True, show_default=True)
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def ode_cmd(run: RunContext, activation, rho0, t_max, dt, early_stop, residual, norm_mode):
    """核 ODE dρ/dt = κ(ρ) - ρ 的 RK4 解。"""
    started = time.perf_counter()
    traj = ode_solve(
        transformed_map(run, activation, residual, norm_mode), rho0,
        t_max=t_max, dt=dt, early_stop=early_stop,
    )
    frame = traj.to_frame()

    stem = f"ode_{safe_name(activation.name)}"
    manifest = run.manifest(
        "ode",
        {"activation": activation.name, "rho0": rho0, "t_max": t_max, "dt": dt,
         "early_stop": early_stop, "residual": residual, "norm_mode": norm_mode},
    )
    run.write_frame(manifest, frame, stem)
    run.write_plot(manifest, frame_series(frame, "ell_or_t", "rho"), stem,
                   title=f"{traj.name} kernel ODE", xlabel="t", ylabel="rho")
    run.finish(manifest, stem, started)
    if traj.flags:
        logger.warning("ODE 诊断标记", activation=traj.name, flags=list(traj.flags))
    run.echo_payload("csv", frame=frame)


@click.command("figure")
@click.argument("activations", nargs=-1, type=ACTIVATION)
@click.option("--rho0", "rho0s", type=RHO, multiple=True,
              help="初始核，可重复；默认 -0.9 -0.5 0 0.5 0.9")
@click.option("--depth", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--leaky-sweep", is_flag=True, help="追加 leaky_relu 的斜率扫描 (0.01, 0.1, 0.2, 0.5)")
@pass_run
@handle_errors
def figure_cmd(run: RunContext, activations, rho0s, depth, leaky_sweep):
    """收敛图数据：每个激活函数四个 CSV（激活函数、核映射+蛛网、核序列、log 距离）。"""
    started = time.perf_counter()
    names = [a.name for a in activations] or list(FIGURE_ACTIVATIONS)
    if leaky_sweep:
        names += leaky_sweep_names()
    rho0s = list(rho0s) or list(DEFAULT_RHO0S)

    manifest = run.manifest("figure", {"activations": names, "rho0s": rho0s, "depth": depth})
    for name in names:
        data = figure_data(name, rho0s=rho0s, depth=depth, K=run.K)
        for panel in PANELS:
            stem = f"figure_{safe_name(data.activation)}_{panel}"
            run.write_frame(manifest, data[panel], stem)
        if run.svg:
            _figure_plots(run, manifest, data)
        logger.info("图数据已写出", activation=name)
    run.finish(manifest, "figure", started)
    for path in manifest.outputs:
        click.echo(path)


def _figure_plots(run: RunContext, manifest, data) -> None:
    prefix = f"figure_{safe_name(data.activation)}"
    kernel = data["kernel_map"]
    plots = {
        "activation": (frame_series(data["activation"], "x", "phi"), False, "x", "phi"),
        "kernel_map": (frame_series(kernel[kernel["kind"] == "map"], "x", "y", label="kappa"),
                       False, "rho", "kappa(rho)"),
        "sequence": (frame_series(data["sequence"], "ell", "rho", group="rho0"), False, "depth", "rho"),
        "distance": (frame_series(data["distance"], "ell", "distance", group="rho0"), True,
                     "depth", "|rho - rho*|"),
    }
    for panel, (series, logy, xlabel, ylabel) in plots.items():
        run.write_plot(manifest, series, f"{prefix}_{panel}", title=f"{data.activation} {panel}",
                       logy=logy, xlabel=xlabel, ylabel=ylabel)
