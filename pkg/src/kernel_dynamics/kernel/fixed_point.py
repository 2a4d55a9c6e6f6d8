"""不动点定位、分类与收缩率。

分类规则（κ(0)、κ'(0)、κ'(1) 三个量决定）：
    case1: κ(0) = 0                ρ* = 0   α = 1/(2 - κ'(0))
    case2: κ(0) > 0, κ'(1) < 1     ρ* = 1   α = κ'(1)
    case3: κ(0) > 0, κ'(1) = 1     ρ* = 1   α = 1 - κ(0) - κ'(0)   （多项式收敛）
    case4: κ(0) > 0, κ'(1) > 1     ρ* ∈ (0, 1)，二分法求解
                                   α = max{1 - κ(0), κ'(ρ*), (1 - ρ*)/(2 - κ'(ρ*))}

case3 的候选先在 [0, 1) 上扫描 κ(ρ) - ρ 的变号；有变号时按 case4 求内部不动点。
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import structlog

from ..exceptions import DomainError, FixedPointError, InvalidParameterError, LinearActivationError
from .kernel_map import KernelMap

logger = structlog.get_logger()

TOL_ZERO = 1e-7
TOL_ONE = 1e-3
BISECT_MAX_ITER = 200
BISECT_WIDTH = 1e-12
SCAN_STEP = 1e-3

CASE_ORTHOGONAL = "case1"
CASE_GEOMETRIC = "case2"
CASE_POLYNOMIAL = "case3"
CASE_INTERIOR = "case4"

FLAG_DKAPPA1 = "dkappa1_series_vs_quadrature"

FUNCTIONAL_ODDS = "abs_rho_over_one_minus_abs_rho"
FUNCTIONAL_GAP = "abs_rho_minus_one"
FUNCTIONAL_DISTANCE = "abs_rho_minus_rho_star"


@dataclass(frozen=True)
class _Classification:
    case_label: str
    rho_star: float
    alpha: float
    dkappa_at_star: float


@dataclass(frozen=True)
class FixedPointReport:
    """不动点分析结果。

    Attributes:
        name: 核映射标签（含变换描述）
        rho_star: 全局吸引不动点 ρ* ∈ [0, 1]
        case_label: case1..case4
        alpha: 收缩率
        dkappa_at_star: κ'(ρ*)
        kappa_at_star: κ(ρ*)（截断级数的值）
        kappa0, dkappa0, dkappa1_series, dkappa1_quad: 分类用到的诊断量
        scale: 归一化常数 C
        tail_mass: 截断尾部能量
        alt_case_label, alt_alpha: 两种 κ'(1) 估计不一致时，用级数值得到的分类
        flags: 差异标记
        margins: 分类阈值的余量
    """

    name: str
    rho_star: float
    case_label: str
    alpha: float
    dkappa_at_star: float
    kappa_at_star: float
    kappa0: float
    dkappa0: float
    dkappa1_series: float
    dkappa1_quad: float
    scale: float
    tail_mass: float
    alt_case_label: Optional[str] = None
    alt_alpha: Optional[float] = None
    flags: Tuple[str, ...] = ()
    margins: Dict[str, float] = field(default_factory=dict)

    @property
    def bias(self) -> str:
        """深层表示的偏置类型。"""
        if self.rho_star <= TOL_ZERO:
            return "orthogonality"
        if self.rho_star >= 1.0:
            return "strong_similarity"
        return "weak_similarity"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "C": self.scale,
            "kappa0": self.kappa0,
            "dkappa0": self.dkappa0,
            "dkappa1_series": self.dkappa1_series,
            "dkappa1_quad": self.dkappa1_quad,
            "rho_star": self.rho_star,
            "case": self.case_label,
            "alpha": self.alpha,
            "tail_mass": self.tail_mass,
            "kappa_at_star": self.kappa_at_star,
            "dkappa_at_star": self.dkappa_at_star,
            "bias": self.bias,
            "alt_case": self.alt_case_label,
            "alt_alpha": self.alt_alpha,
            "flags": list(self.flags),
        }


def _interior_bracket(km: KernelMap) -> Optional[Tuple[float, float]]:
    """[0, 1-TOL_ONE] 上 κ(ρ) - ρ 由正变非正的第一个网格区间。"""
    upper = 1.0 - TOL_ONE
    grid = np.arange(0.0, upper + SCAN_STEP / 2, SCAN_STEP)
    gap = km.evaluate(grid) - grid
    sign_change = np.nonzero((gap[:-1] > 0) & (gap[1:] <= 0))[0]
    if len(sign_change) == 0:
        return None
    return float(grid[sign_change[0]]), float(grid[sign_change[0] + 1])


def _bisect_fixed_point(km: KernelMap, bracket: Optional[Tuple[float, float]] = None) -> float:
    bracket = bracket or _interior_bracket(km)
    if bracket is None:
        raise FixedPointError(f"{km.label}: κ(ρ) - ρ 在 [0, {1.0 - TOL_ONE}] 上没有变号")

    lo, hi = bracket
    for _ in range(BISECT_MAX_ITER):
        if hi - lo < BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if km.evaluate(mid) - mid > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _interior(km: KernelMap, bracket: Optional[Tuple[float, float]] = None) -> _Classification:
    rho_star = _bisect_fixed_point(km, bracket)
    slope = km.derivative(rho_star)
    alpha = max(1.0 - km.kappa0, slope, (1.0 - rho_star) / (2.0 - slope))
    return _Classification(CASE_INTERIOR, rho_star, alpha, slope)


def _classify(km: KernelMap, dkappa1: float) -> _Classification:
    kappa0, dkappa0 = km.kappa0, km.dkappa0
    if kappa0 <= TOL_ZERO:
        return _Classification(CASE_ORTHOGONAL, 0.0, 1.0 / (2.0 - dkappa0), dkappa0)
    if dkappa1 < 1.0 - TOL_ONE:
        return _Classification(CASE_GEOMETRIC, 1.0, dkappa1, dkappa1)
    if dkappa1 <= 1.0 + TOL_ONE:
        # 强残差把 κ'(1) - 1 压进容差带，内部不动点仍然存在
        bracket = _interior_bracket(km)
        if bracket is not None:
            return _interior(km, bracket)
        return _Classification(CASE_POLYNOMIAL, 1.0, 1.0 - kappa0 - dkappa0, dkappa1)
    return _interior(km)


def find_fixed_point(km: KernelMap) -> FixedPointReport:
    """定位并分类核映射的全局吸引不动点。

    κ'(1) 用求积值 E[φ'(X)²] 分类；级数值与之相差超过 TOL_ONE 时，
    报告同时给出级数值对应的备选分类。

    Raises:
        LinearActivationError: 线性激活函数，定理不适用
        FixedPointError: case4 中找不到变号区间
    """
    if km.is_linear:
        raise LinearActivationError(f"{km.label}: 定理要求非线性激活函数")

    primary = _classify(km, km.dkappa1_quad)
    alt_case_label, alt_alpha, flags = None, None, []
    discrepancy = abs(km.dkappa1_series - km.dkappa1_quad)
    if discrepancy > TOL_ONE:
        alternative = _classify(km, km.dkappa1_series)
        alt_case_label, alt_alpha = alternative.case_label, alternative.alpha
        flags.append(FLAG_DKAPPA1)
        logger.warning(
            "κ'(1) 两种估计不一致",
            activation=km.label,
            series=km.dkappa1_series,
            quadrature=km.dkappa1_quad,
            case=primary.case_label,
            alt_case=alt_case_label,
        )

    report = FixedPointReport(
        name=km.label,
        rho_star=primary.rho_star,
        case_label=primary.case_label,
        alpha=primary.alpha,
        dkappa_at_star=primary.dkappa_at_star,
        kappa_at_star=km.evaluate(primary.rho_star),
        kappa0=km.kappa0,
        dkappa0=km.dkappa0,
        dkappa1_series=km.dkappa1_series,
        dkappa1_quad=km.dkappa1_quad,
        scale=km.scale,
        tail_mass=km.tail_mass,
        alt_case_label=alt_case_label,
        alt_alpha=alt_alpha,
        flags=tuple(flags),
        margins={
            "kappa0_minus_tol_zero": km.kappa0 - TOL_ZERO,
            "dkappa1_minus_one": km.dkappa1_quad - 1.0,
            "dkappa1_discrepancy": discrepancy,
        },
    )
    logger.debug(
        "不动点分析完成",
        activation=km.label,
        case=report.case_label,
        rho_star=report.rho_star,
        alpha=report.alpha,
    )
    return report


@dataclass(frozen=True)
class ContractionBound:
    """定理给出的某个距离泛函在深度 ℓ 的上界。"""

    functional: str
    value: float

    def __float__(self) -> float:
        return self.value


def _functional_name(case_label: str) -> str:
    if case_label == CASE_ORTHOGONAL:
        return FUNCTIONAL_ODDS
    if case_label in (CASE_GEOMETRIC, CASE_POLYNOMIAL):
        return FUNCTIONAL_GAP
    return FUNCTIONAL_DISTANCE


def functional_value(report: FixedPointReport, rho: float) -> float:
    """当前分类所用距离泛函在 ρ 处的值。"""
    if report.case_label == CASE_ORTHOGONAL:
        a = abs(rho)
        return math.inf if a >= 1.0 else a / (1.0 - a)
    if report.case_label in (CASE_GEOMETRIC, CASE_POLYNOMIAL):
        return abs(rho - 1.0)
    return abs(rho - report.rho_star)


def contraction_bound(report: FixedPointReport, rho0: float, ell: int) -> ContractionBound:
    """深度 ℓ 处距离泛函的理论上界。

    Args:
        report: find_fixed_point 的结果
        rho0: 初始核，|ρ0| < 1
        ell: 深度 ℓ ≥ 0

    Raises:
        DomainError: |ρ0| ≥ 1
    """
    if not abs(rho0) < 1.0:
        raise DomainError(f"contraction_bound 要求 |rho0| < 1: {rho0}")
    if ell < 0:
        raise InvalidParameterError(f"深度必须非负: {ell}")

    alpha = report.alpha
    case = report.case_label
    if case == CASE_ORTHOGONAL:
        a = abs(rho0)
        value = a / (1.0 - a) * alpha ** ell
    elif case == CASE_GEOMETRIC:
        value = abs(rho0 - 1.0) * alpha ** ell
    elif case == CASE_POLYNOMIAL:
        gap = abs(rho0 - 1.0)
        value = gap / (ell * alpha * gap + 1.0)
    else:
        value = abs(rho0 - report.rho_star) / (1.0 - abs(rho0)) * alpha ** ell
    return ContractionBound(functional=_functional_name(case), value=float(value))


def distance_bound(report: FixedPointReport, rho0: float, ell: int) -> float:
    """把泛函上界换算成 |ρ_ℓ - ρ*| 的上界。"""
    bound = contraction_bound(report, rho0, ell).value
    if report.case_label == CASE_ORTHOGONAL:
        # |ρ|/(1-|ρ|) ≤ B  ⇔  |ρ| ≤ B/(1+B)
        return bound / (1.0 + bound)
    return bound


def theory_envelope(report: FixedPointReport, rho0: float, depth: int) -> np.ndarray:
    """ℓ = 0..depth 的 |ρ_ℓ - ρ*| 上界序列。"""
    return np.array([distance_bound(report, rho0, ell) for ell in range(depth + 1)])


@dataclass(frozen=True)
class DepthThreshold:
    """数值上无法区分两个输入所需的深度；只有 case2 适用。"""

    case_label: str
    epsilon: float
    depth: Optional[int] = None

    @property
    def applicable(self) -> bool:
        return self.depth is not None

    def __str__(self) -> str:
        if self.applicable:
            return str(self.depth)
        return f"not applicable ({self.case_label})"


def depth_threshold_from_rate(dkappa1: float, epsilon: float) -> int:
    """L = ⌈ln(1/ε) / ln(1/κ'(1))⌉。"""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon 必须在 (0, 1) 内: {epsilon}")
    if not 0.0 < dkappa1 < 1.0:
        raise InvalidParameterError(f"κ'(1) 必须在 (0, 1) 内: {dkappa1}")
    return int(math.ceil(math.log(1.0 / epsilon) / math.log(1.0 / dkappa1)))


def depth_threshold(report: FixedPointReport, epsilon: float) -> DepthThreshold:
    """case2 报告 L，其它情形返回不适用。"""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon 必须在 (0, 1) 内: {epsilon}")
    if report.case_label != CASE_GEOMETRIC:
        return DepthThreshold(case_label=report.case_label, epsilon=epsilon)
    depth = depth_threshold_from_rate(report.dkappa1_quad, epsilon)
    return DepthThreshold(case_label=report.case_label, epsilon=epsilon, depth=depth)


def gram_min_eigenvalue(rho: float, n: int) -> float:
    """对角为 1、非对角为 ρ 的 n×n Gram 矩阵的最小特征值。"""
    if n < 1:
        raise InvalidParameterError(f"n 必须为正: {n}")
    gram = np.full((n, n), float(rho))
    np.fill_diagonal(gram, 1.0)
    return float(np.linalg.eigvalsh(gram)[0])
