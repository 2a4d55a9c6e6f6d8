"""Hermite 模块 - 归一化 Hermite 多项式、展开系数与 Mehler 期望。"""

from .polynomials import he_all, he_eval
from .expansion import (
    DEFAULT_TRUNCATION,
    HermiteExpansion,
    expand,
    mehler_matrix,
    mehler_product,
)

__all__ = [
    "DEFAULT_TRUNCATION",
    "HermiteExpansion",
    "expand",
    "he_all",
    "he_eval",
    "mehler_matrix",
    "mehler_product",
]
