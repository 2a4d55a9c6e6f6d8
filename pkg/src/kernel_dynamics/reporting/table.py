"""常用激活函数的不动点汇总表。"""

from typing import Iterable, Optional

import pandas as pd
import structlog

from ..activations.catalog import TABLE_NAMES
from ..hermite.expansion import DEFAULT_TRUNCATION
from ..kernel.fixed_point import CASE_POLYNOMIAL, FLAG_DKAPPA1, FixedPointReport, find_fixed_point
from ..kernel.kernel_map import build_kernel_map

logger = structlog.get_logger()

FLAG_CASE3_ALPHA = "case3_alpha_is_formula_value"

TABLE_COLUMNS = [
    "activation", "C", "alpha", "rho_star", "kappa_at_star", "kappa0", "dkappa0",
    "dkappa1", "dkappa_at_star", "case", "dkappa1_series", "alt_case", "alt_alpha",
    "footnotes",
]


def footnotes(report: FixedPointReport) -> str:
    """与参考汇总表不一致之处的脚注标记，分号分隔。"""
    notes = list(report.flags)
    if report.case_label == CASE_POLYNOMIAL and FLAG_DKAPPA1 not in notes:
        notes.append(FLAG_CASE3_ALPHA)
    return ";".join(notes)


def table_row(report: FixedPointReport) -> dict:
    return {
        "activation": report.name,
        "C": report.scale,
        "alpha": report.alpha,
        "rho_star": report.rho_star,
        "kappa_at_star": report.kappa_at_star,
        "kappa0": report.kappa0,
        "dkappa0": report.dkappa0,
        "dkappa1": report.dkappa1_quad,
        "dkappa_at_star": report.dkappa_at_star,
        "case": report.case_label,
        "dkappa1_series": report.dkappa1_series,
        "alt_case": report.alt_case_label or "",
        "alt_alpha": report.alt_alpha,
        "footnotes": footnotes(report),
    }


def build_table(
    names: Optional[Iterable[str]] = None, K: int = DEFAULT_TRUNCATION
) -> pd.DataFrame:
    """每个激活函数一行：C、α、ρ*、κ(ρ*)、κ(0)、κ'(0)、κ'(1)、κ'(ρ*)、case。

    Args:
        names: 激活函数名称，默认为汇总表的八个激活函数
        K: Hermite 截断阶数
    """
    rows = []
    for name in names or TABLE_NAMES:
        report = find_fixed_point(build_kernel_map(name, K))
        rows.append(table_row(report))
        logger.debug("汇总表行", activation=name, case=report.case_label, alpha=report.alpha)
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)
