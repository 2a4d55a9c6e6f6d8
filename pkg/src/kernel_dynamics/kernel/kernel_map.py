"""核映射 κ(ρ) = Σ c_k² ρ^k 的构造、求值、求导，以及二维求积参照值。"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
import structlog
from numpy.polynomial import polynomial as P

from ..activations.catalog import Activation, lookup
from ..activations.quadrature import DEFAULT_RULE, QuadratureRule, normal_pdf
from ..exceptions import DegenerateActivationError, InvalidParameterError
from ..hermite.expansion import DEFAULT_TRUNCATION, expand

logger = structlog.get_logger()

# 除 c_0 外的能量低于该值视为常数激活函数
CONSTANT_TOL = 1e-12
# Σ_{k≥2} c_k² 低于该值视为线性激活函数
LINEAR_TOL = 1e-12
RHO_SLACK = 1e-12
_ORACLE_CHUNK = 256


def check_rho(rho, name: str = "rho"):
    """检查 |ρ| ≤ 1，允许 1e-12 的舍入误差。"""
    arr = np.asarray(rho, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0 + RHO_SLACK):
        raise InvalidParameterError(f"{name} 必须在 [-1, 1] 内: {rho}")
    return np.clip(arr, -1.0, 1.0)


def fold_tail(
    squared: np.ndarray, tail_mass: float, kappa_minus_one: float
) -> np.ndarray:
    """把截断丢失的能量折叠到 K+1、K+2 两阶，使 κ(1) = 1、κ(-1) 与求积值一致。

    偶数阶与奇数阶的尾部能量由 κ(-1) = E[φ(X)φ(-X)] 拆分，两部分都截断为非负。

    Args:
        squared: c_k²，k = 0..K
        tail_mass: 1 - Σ c_k²，负值按 0 处理
        kappa_minus_one: 求积得到的 κ(-1)

    Returns:
        长度 K+3 的系数，前 K+1 项不变
    """
    K = len(squared) - 1
    tail = max(float(tail_mass), 0.0)
    signs = np.where(np.arange(K + 1) % 2 == 0, 1.0, -1.0)
    parity_gap = float(kappa_minus_one) - float(np.dot(signs, squared))
    even = min(max(0.5 * (tail + parity_gap), 0.0), tail)
    odd = tail - even
    # K+1 与 K+2 一奇一偶
    tail_terms = (odd, even) if K % 2 == 0 else (even, odd)
    return np.concatenate([squared, tail_terms])


@dataclass(frozen=True, eq=False)
class KernelMap:
    """激活函数的核映射。

    由激活函数构造时，截断尾部能量折叠在 K+1、K+2 两阶上，κ(1) = 1 精确成立。

    Attributes:
        name: 激活函数名称
        squared_coeffs: κ 的幂级数系数；由激活函数构造时为 c_0²..c_K² 加两项尾部
        tail_mass: 截断丢失的能量（诊断量，经变换后同步缩放）
        dkappa1_quad: 求积得到的 κ'(1) = E[φ'(X)²]（截断无关）
        scale: 原激活函数的归一化常数 C
        transform: 已应用的变换描述，例如 "residual(r=0.5)"
        series_truncation: Hermite 截断阶数 K；None 表示全部系数都是级数项
    """

    name: str
    squared_coeffs: np.ndarray
    tail_mass: float
    dkappa1_quad: float
    scale: float = 1.0
    transform: str = ""
    series_truncation: Optional[int] = None

    def __post_init__(self):
        sq = np.asarray(self.squared_coeffs, dtype=float)
        if sq.ndim != 1 or len(sq) < 2:
            raise InvalidParameterError("核映射至少需要 c_0²、c_1² 两个系数")
        if np.any(sq < 0):
            raise InvalidParameterError("核映射系数必须非负")
        if float(np.sum(sq[1:])) <= CONSTANT_TOL:
            raise DegenerateActivationError(f"{self.name}: 常数激活函数，核映射退化")
        sq.setflags(write=False)
        object.__setattr__(self, "squared_coeffs", sq)
        object.__setattr__(self, "_descending", tuple(float(c) for c in sq[::-1]))

    @classmethod
    def from_activation(
        cls,
        act: Activation,
        K: int = DEFAULT_TRUNCATION,
        rule: Optional[QuadratureRule] = None,
    ) -> "KernelMap":
        """展开激活函数，折叠截断尾部，并计算求积版 κ'(1)。"""
        rule = rule or DEFAULT_RULE
        expansion = expand(act, K, rule)
        dkappa1_quad = rule.expectation(
            lambda x: np.square(act.derivative(x)), act.breakpoints
        )
        squared = fold_tail(expansion.squared, expansion.tail_mass, kernel_oracle(act, -1.0, rule))
        return cls(
            name=act.name,
            squared_coeffs=squared,
            tail_mass=expansion.tail_mass,
            dkappa1_quad=float(dkappa1_quad),
            scale=act.scale,
            series_truncation=K,
        )

    @property
    def truncation(self) -> int:
        if self.series_truncation is None:
            return len(self.squared_coeffs) - 1
        return self.series_truncation

    @property
    def label(self) -> str:
        return f"{self.name}[{self.transform}]" if self.transform else self.name

    @property
    def kappa0(self) -> float:
        return float(self.squared_coeffs[0])

    @property
    def dkappa0(self) -> float:
        return float(self.squared_coeffs[1])

    @property
    def dkappa1_series(self) -> float:
        """逐项求导的 κ'(1) = Σ_{k≤K} k c_k²，不含折叠的尾部，截断会系统性低估。"""
        series = self.squared_coeffs[: self.truncation + 1]
        return float(np.dot(np.arange(len(series)), series))

    @property
    def is_linear(self) -> bool:
        return float(np.sum(self.squared_coeffs[2:])) <= LINEAR_TOL

    def evaluate(self, rho):
        """κ(ρ)，Horner 求值，支持标量和数组。"""
        if np.ndim(rho) == 0:
            # 与 polyval 相同的运算顺序，标量路径结果逐位一致
            x = float(rho)
            acc = self._descending[0]
            for c in self._descending[1:]:
                acc = c + acc * x
            return acc
        return P.polyval(rho, self.squared_coeffs)

    def derivative(self, rho, order: int = 1):
        """κ 的 order 阶导数（逐项求导的级数）。"""
        if order < 0:
            raise InvalidParameterError("导数阶数必须非负")
        coeffs = P.polyder(self.squared_coeffs, order) if order else self.squared_coeffs
        value = P.polyval(rho, coeffs)
        return float(value) if np.ndim(value) == 0 else value

    def __call__(self, rho):
        return self.evaluate(rho)

    def __repr__(self) -> str:
        return (
            f"KernelMap(name={self.label!r}, K={self.truncation}, "
            f"kappa0={self.kappa0:.4g}, dkappa0={self.dkappa0:.4g})"
        )


@lru_cache(maxsize=128)
def build_kernel_map(name: str, K: int = DEFAULT_TRUNCATION) -> KernelMap:
    """按名称构造（并缓存）核映射。"""
    km = KernelMap.from_activation(lookup(name), K)
    logger.debug("构造核映射", activation=km.name, K=K, tail_mass=km.tail_mass)
    return km


def kernel_eval(km: KernelMap, rho):
    """κ(ρ)，|ρ| ≤ 1。"""
    return km.evaluate(check_rho(rho))


@dataclass(frozen=True)
class KernelDerivative:
    """核映射导数。ρ=1 的一阶导数同时给出级数值和求积值。"""

    order: int
    rho: float
    series: float
    quadrature: Optional[float] = None

    @property
    def value(self) -> float:
        return self.series if self.quadrature is None else self.quadrature

    @property
    def discrepancy(self) -> float:
        return 0.0 if self.quadrature is None else abs(self.quadrature - self.series)

    def __float__(self) -> float:
        return self.value


def kernel_derivative(km: KernelMap, rho: float, order: int = 1) -> KernelDerivative:
    """κ 的一阶或二阶导数。

    Args:
        km: 核映射
        rho: 求导位置，|ρ| ≤ 1
        order: 1 或 2

    Returns:
        KernelDerivative；order=1 且 ρ=1 时附带 E[φ'(X)²]
    """
    if order not in (1, 2):
        raise InvalidParameterError(f"只支持一阶或二阶导数: {order}")
    rho = float(check_rho(rho))
    series = km.derivative(rho, order)
    quadrature = km.dkappa1_quad if order == 1 and rho == 1.0 else None
    return KernelDerivative(order=order, rho=rho, series=series, quadrature=quadrature)


def _inner_segments(
    act: Activation, rho: float, x: np.ndarray, rule: QuadratureRule
):
    """Z 方向的节点和权重，在 φ(ρx + sZ) 的不可导点处切分。"""
    s = np.sqrt(1.0 - rho * rho)
    hw = rule.half_width
    panels = max(1, int(np.ceil(2 * hw / rule.panel_width)))
    cuts = [np.clip((b - rho * x) / s, -hw, hw) for b in act.breakpoints]
    bounds = np.sort(
        np.column_stack([np.full_like(x, -hw), *cuts, np.full_like(x, hw)]), axis=1
    )
    nodes, weights = [], []
    for j in range(bounds.shape[1] - 1):
        z, wz = rule.segment_nodes(bounds[:, j], bounds[:, j + 1], panels)
        nodes.append(z)
        weights.append(wz * normal_pdf(z))
    return np.hstack(nodes), np.hstack(weights)


def kernel_oracle(act: Activation, rho: float, rule: Optional[QuadratureRule] = None) -> float:
    """直接用二维求积计算 E[φ(X)φ(Y)]，不经过 Hermite 级数。

    Y = ρX + sqrt(1-ρ²)Z；外层按 φ 的不可导点切分，内层按其在 Z 上的像切分。
    """
    rho = float(check_rho(rho))
    rule = rule or DEFAULT_RULE
    if abs(rho) == 1.0:
        bps = set(act.breakpoints) | {rho * b for b in act.breakpoints}
        return rule.expectation(lambda x: act(x) * act(rho * x), sorted(bps))

    s = np.sqrt(1.0 - rho * rho)
    x, wx = rule.nodes_weights(act.breakpoints)
    total = 0.0
    for start in range(0, len(x), _ORACLE_CHUNK):
        xc = x[start:start + _ORACLE_CHUNK]
        z, wz = _inner_segments(act, rho, xc, rule)
        inner = np.sum(wz * act(rho * xc[:, None] + s * z), axis=1)
        total += float(np.dot(wx[start:start + _ORACLE_CHUNK] * act(xc), inner))
    return total
