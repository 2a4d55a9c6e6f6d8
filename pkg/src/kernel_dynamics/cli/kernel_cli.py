"""核映射相关命令：analyze、table、depth-threshold。"""

import time

import click
import numpy as np
import pandas as pd
import structlog

from ..dynamics.trajectory import iterate_gap_to_one
from ..hermite.expansion import expand
from ..kernel.fixed_point import (
    CASE_GEOMETRIC,
    depth_threshold,
    depth_threshold_from_rate,
    find_fixed_point,
)
from ..reporting.export import write_json
from ..reporting.table import build_table
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

DEFAULT_EPSILON = 2.0 ** -128


@click.command("analyze")
@click.argument("activation", type=ACTIVATION)
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def analyze(run: RunContext, activation, residual, norm_mode):
    """不动点分析：ρ*、分类、收缩率 α，并导出 Hermite 系数表。"""
    started = time.perf_counter()
    report = find_fixed_point(transformed_map(run, activation, residual, norm_mode))
    payload = report.to_dict()

    stem = f"analyze_{safe_name(activation.name)}"
    manifest = run.manifest(
        "analyze", {"activation": activation.name, "residual": residual, "norm_mode": norm_mode}
    )
    manifest.add_output(write_json(payload, run.path(f"{stem}.json")))
    # 系数表属于激活函数本身，不随残差和归一化变化
    run.write_frame(manifest, expand(activation, run.K).to_frame(), f"{stem}_expansion")
    run.finish(manifest, stem, started)
    logger.info("分析完成", activation=activation.name, case=report.case_label, alpha=report.alpha)
    run.echo_payload("json", frame=pd.DataFrame([payload]).drop(columns=["flags"]), payload=payload)


@click.command("table")
@pass_run
@handle_errors
def table(run: RunContext):
    """常用激活函数的汇总表（CSV）。"""
    started = time.perf_counter()
    frame = build_table(K=run.K)
    manifest = run.manifest("table", {})
    run.write_frame(manifest, frame, "table")
    run.finish(manifest, "table", started)
    run.echo_payload("csv", frame=frame)


@click.command("depth-threshold")
@click.argument("activation", type=ACTIVATION)
@click.option("--epsilon", type=float, default=DEFAULT_EPSILON, show_default=True,
              help="精度 ε，默认 2^-128")
@click.option("--rate", type=float, default=None, help="直接代入的 κ'(1) 值（覆盖计算值）")
@residual_option
@norm_mode_option
@pass_run
@handle_errors
def depth_threshold_cmd(run: RunContext, activation, epsilon, rate, residual, norm_mode):
    """两个输入在数值上无法区分所需的深度 L（仅 case2）。"""
    started = time.perf_counter()
    km = transformed_map(run, activation, residual, norm_mode)
    report = find_fixed_point(km)
    result = depth_threshold(report, epsilon)

    depth = result.depth
    if rate is not None:
        depth = depth_threshold_from_rate(rate, epsilon)
    confirmed = None
    if result.applicable:
        # 从正交输入出发迭代 1-ρ，找到首次低于 ε 的深度
        gaps = iterate_gap_to_one(km, 1.0, depth)
        below = np.nonzero(gaps < epsilon)[0]
        confirmed = int(below[0]) if len(below) else None

    payload = {
        "activation": km.label,
        "case": report.case_label,
        "epsilon": epsilon,
        "dkappa1": rate if rate is not None else report.dkappa1_quad,
        "depth": depth if (result.applicable or rate is not None) else None,
        "applicable": result.applicable or rate is not None,
        "confirmed_depth": confirmed,
    }
    stem = f"depth_threshold_{safe_name(activation.name)}"
    manifest = run.manifest(
        "depth-threshold",
        {"activation": activation.name, "epsilon": epsilon, "rate": rate,
         "residual": residual, "norm_mode": norm_mode},
    )
    manifest.add_output(write_json(payload, run.path(f"{stem}.json")))
    run.finish(manifest, stem, started)

    if run.fmt == "json":
        run.echo_payload("json", payload=payload)
    elif payload["applicable"]:
        click.echo(str(payload["depth"]))
    else:
        click.echo(str(result))
    if report.case_label != CASE_GEOMETRIC and rate is None:
        logger.info("深度阈值不适用", activation=km.label, case=report.case_label)
