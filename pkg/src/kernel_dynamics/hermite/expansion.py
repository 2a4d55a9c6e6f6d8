"""激活函数的 Hermite 展开与 Mehler 引理的二维求积验证。"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Optional

import numpy as np
import pandas as pd
import structlog

from ..activations.quadrature import DEFAULT_RULE, QuadratureRule
from ..exceptions import InvalidParameterError
from .polynomials import he_all

if TYPE_CHECKING:
    from ..activations.catalog import Activation

logger = structlog.get_logger()

DEFAULT_TRUNCATION = 60
TAIL_WARNING = 1e-3
# 外层节点分块大小，限制 (K+1, chunk, N) 张量的内存
_OUTER_CHUNK = 128


@dataclass(frozen=True, eq=False)
class HermiteExpansion:
    """截断的 Hermite 展开 φ ≈ Σ_{k≤K} c_k he_k。

    Attributes:
        name: 激活函数名称
        coeffs: 系数 c_0..c_K
        truncation: 截断阶数 K
        tail_mass: 1 - Σ c_k^2，截断丢失的能量
        warning: tail_mass 超过阈值时为 True
    """

    name: str
    coeffs: np.ndarray
    truncation: int
    tail_mass: float
    warning: bool = False

    @property
    def squared(self) -> np.ndarray:
        return np.square(self.coeffs)

    @property
    def energy(self) -> float:
        """Σ_{k≤K} c_k^2。"""
        return float(np.sum(self.squared))

    def to_frame(self) -> pd.DataFrame:
        """导出用的 DataFrame: k, c_k, c_k_squared, cumulative_energy。"""
        squared = self.squared
        return pd.DataFrame(
            {
                "k": np.arange(self.truncation + 1),
                "c_k": self.coeffs,
                "c_k_squared": squared,
                "cumulative_energy": np.cumsum(squared),
            }
        )


def expand(
    act: "Activation",
    K: int = DEFAULT_TRUNCATION,
    rule: Optional[QuadratureRule] = None,
) -> HermiteExpansion:
    """计算 c_k = E[φ(X) he_k(X)]，k = 0..K。

    Args:
        act: 归一化激活函数
        K: 截断阶数
        rule: 求积规则，默认使用模块统一规则

    Returns:
        HermiteExpansion，tail_mass > 1e-3 时 warning=True（不抛异常）
    """
    if K < 0:
        raise InvalidParameterError("截断阶数 K 必须非负")
    rule = rule or DEFAULT_RULE
    x, w = rule.nodes_weights(act.breakpoints)
    coeffs = he_all(K, x) @ (w * act(x))
    tail_mass = float(1.0 - np.sum(np.square(coeffs)))
    warning = tail_mass > TAIL_WARNING
    if warning:
        logger.warning("Hermite 截断尾部能量过大", activation=act.name, K=K, tail_mass=tail_mass)
    else:
        logger.debug("Hermite 展开完成", activation=act.name, K=K, tail_mass=tail_mass)
    coeffs.setflags(write=False)
    return HermiteExpansion(
        name=act.name, coeffs=coeffs, truncation=K, tail_mass=tail_mass, warning=warning
    )


@lru_cache(maxsize=64)
def _mehler_matrix(max_degree: int, rho: float, rule: QuadratureRule) -> np.ndarray:
    x, wx = rule.nodes_weights()
    hx = he_all(max_degree, x) * wx
    if abs(rho) == 1.0:
        result = hx @ he_all(max_degree, rho * x).T
    else:
        # Y = ρX + sqrt(1-ρ²)Z，外层 X、内层 Z 的张量积规则
        s = np.sqrt(1.0 - rho * rho)
        z, wz = rule.nodes_weights()
        result = np.zeros((max_degree + 1, max_degree + 1))
        for start in range(0, len(x), _OUTER_CHUNK):
            chunk = slice(start, start + _OUTER_CHUNK)
            y = rho * x[chunk, None] + s * z[None, :]
            inner = he_all(max_degree, y) @ wz
            result += hx[:, chunk] @ inner.T
    result.setflags(write=False)
    return result


def mehler_matrix(
    max_degree: int, rho: float, rule: Optional[QuadratureRule] = None
) -> np.ndarray:
    """E[he_m(X) he_n(Y)] 的完整矩阵，m, n = 0..max_degree，corr(X, Y) = rho。

    直接做二维数值积分，不使用 Mehler 公式本身，用作公式的独立验证。
    """
    if max_degree < 0:
        raise InvalidParameterError("max_degree 必须非负")
    if not -1.0 <= rho <= 1.0:
        raise InvalidParameterError(f"相关系数必须在 [-1, 1] 内: {rho}")
    return _mehler_matrix(int(max_degree), float(rho), rule or DEFAULT_RULE)


def mehler_product(m: int, n: int, rho: float) -> float:
    """E[he_m(X) he_n(Y)]，X、Y 为相关系数 rho 的标准二维正态。"""
    if m < 0 or n < 0:
        raise InvalidParameterError("Hermite 阶数必须非负")
    return float(mehler_matrix(max(m, n), rho)[m, n])
