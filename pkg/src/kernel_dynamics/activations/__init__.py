"""激活函数模块 - 高斯求积规则与归一化激活函数目录。"""

from .quadrature import DEFAULT_RULE, QuadratureRule, gaussian_expectation, normal_pdf
from .catalog import (
    CATALOG_NAMES,
    TABLE_NAMES,
    Activation,
    catalog,
    hermite_basis,
    is_square_integrable,
    lookup,
    make_activation,
    normalization_constant,
    table_activations,
)

__all__ = [
    "CATALOG_NAMES",
    "DEFAULT_RULE",
    "TABLE_NAMES",
    "Activation",
    "QuadratureRule",
    "catalog",
    "gaussian_expectation",
    "hermite_basis",
    "is_square_integrable",
    "lookup",
    "make_activation",
    "normal_pdf",
    "normalization_constant",
    "table_activations",
]
