"""报告模块 - CSV/JSON 导出、运行清单、汇总表和图数据。"""

from .export import (
    RunManifest,
    dumps_json,
    frame_to_csv,
    load_schema,
    write_csv,
    write_json,
)
from .figure import (
    DEFAULT_RHO0S,
    FIGURE_ACTIVATIONS,
    LEAKY_SLOPES,
    PANELS,
    FigureData,
    figure_data,
    leaky_sweep_names,
)
from .svg import frame_series, render_lines, write_svg
from .table import FLAG_CASE3_ALPHA, TABLE_COLUMNS, build_table, footnotes, table_row

__all__ = [
    "DEFAULT_RHO0S",
    "FIGURE_ACTIVATIONS",
    "FLAG_CASE3_ALPHA",
    "LEAKY_SLOPES",
    "PANELS",
    "TABLE_COLUMNS",
    "FigureData",
    "RunManifest",
    "build_table",
    "dumps_json",
    "figure_data",
    "footnotes",
    "frame_series",
    "frame_to_csv",
    "leaky_sweep_names",
    "load_schema",
    "render_lines",
    "table_row",
    "write_csv",
    "write_json",
    "write_svg",
]
