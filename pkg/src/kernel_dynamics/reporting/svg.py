"""极简 SVG 折线图，只作为 CSV 数据的预览。"""

from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

import numpy as np
import pandas as pd

from .export import PathLike

WIDTH = 640
HEIGHT = 400
MARGIN = 50
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")

Series = Tuple[str, Sequence[float], Sequence[float]]


def _bounds(values: np.ndarray) -> Tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo < 1e-300:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def render_lines(
    series: Iterable[Series],
    title: str = "",
    logy: bool = False,
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """把若干 (label, xs, ys) 画成折线，返回 SVG 文本。

    logy=True 时 y 取 log10，非正值和非有限值被丢弃。
    """
    cleaned = []
    for label, xs, ys in series:
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if logy:
            keep &= y > 0
        if keep.sum() >= 2:
            cleaned.append((label, x[keep], np.log10(y[keep]) if logy else y[keep]))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    if cleaned:
        x_lo, x_hi = _bounds(np.concatenate([c[1] for c in cleaned]))
        y_lo, y_hi = _bounds(np.concatenate([c[2] for c in cleaned]))
        span_x, span_y = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

        def px(v):
            return MARGIN + (v - x_lo) / (x_hi - x_lo) * span_x

        def py(v):
            return HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * span_y

        parts.append(
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{span_x}" height="{span_y}" '
            'fill="none" stroke="black"/>'
        )
        y_label = f"log10 {ylabel}" if logy else ylabel
        parts += [
            f'<text x="{MARGIN}" y="{HEIGHT - 15}" font-size="11">{x_lo:.3g}</text>',
            f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 15}" text-anchor="end" font-size="11">{x_hi:.3g}</text>',
            f'<text x="5" y="{HEIGHT - MARGIN}" font-size="11">{y_lo:.3g}</text>',
            f'<text x="5" y="{MARGIN}" font-size="11">{y_hi:.3g}</text>',
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 5}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
            f'<text x="12" y="{HEIGHT / 2}" font-size="12" transform="rotate(-90 12 {HEIGHT / 2})" '
            f'text-anchor="middle">{escape(y_label)}</text>',
        ]
        for i, (label, x, y) in enumerate(cleaned):
            color = PALETTE[i % len(PALETTE)]
            points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
            )
            parts.append(
                f'<text x="{WIDTH - MARGIN + 4}" y="{MARGIN + 14 * (i + 1)}" font-size="10" '
                f'fill="{color}">{escape(str(label))}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)


def write_svg(svg: str, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    return path


def frame_series(
    frame: pd.DataFrame, x: str, y: str, group: Optional[str] = None, label: Union[str, None] = None
) -> list:
    """DataFrame 转成 render_lines 的输入，按 group 列分组。"""
    if group is None:
        return [(label or y, frame[x].to_numpy(), frame[y].to_numpy())]
    return [
        (f"{group}={key:g}" if isinstance(key, float) else f"{group}={key}", sub[x].to_numpy(), sub[y].to_numpy())
        for key, sub in frame.groupby(group, sort=False)
    ]
