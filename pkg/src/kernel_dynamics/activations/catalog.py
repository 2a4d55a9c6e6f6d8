"""激活函数目录 - 精确导数、不可导点和能量归一化常数。"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.special import erf, expit

from ..exceptions import (
    ActivationNotFoundError,
    DegenerateActivationError,
    InvalidParameterError,
    NotSquareIntegrableError,
)
from ..hermite.polynomials import he_all
from .quadrature import DEFAULT_RULE, QuadratureRule, normal_pdf

logger = structlog.get_logger()

ScalarFn = Callable[[np.ndarray], np.ndarray]

# self-normalizing network constants
SELU_LAMBDA = 1.0507009873554804934193349852946
SELU_ALPHA = 1.6732632423543772848170429916717

DEFAULT_LEAKY_SLOPE = 0.01
EDGE_MASS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Activation:
    """归一化后的激活函数 φ(x) = f(x) / C。

    Attributes:
        name: 规范名称，例如 "relu"、"leaky_relu:0.2"、"hermite:3"
        f: 原始函数 ℝ→ℝ（向量化）
        df: 原始导数（几乎处处定义）
        breakpoints: 升序、去重的不可导点
        scale: 归一化常数 C = sqrt(E f(X)^2)
    """

    name: str
    f: ScalarFn
    df: ScalarFn
    breakpoints: Tuple[float, ...] = ()
    scale: float = 1.0
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if list(self.breakpoints) != sorted(set(self.breakpoints)):
            raise InvalidParameterError(f"{self.name}: breakpoints 必须升序且无重复")
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise InvalidParameterError(f"{self.name}: 归一化常数必须为正")

    def __call__(self, x):
        return self.f(np.asarray(x, dtype=float)) / self.scale

    def derivative(self, x):
        return self.df(np.asarray(x, dtype=float)) / self.scale

    def raw(self, x):
        return self.f(np.asarray(x, dtype=float))

    def energy(self, rule: Optional[QuadratureRule] = None) -> float:
        """E[φ(X)^2]，归一化后应为 1。"""
        rule = rule or DEFAULT_RULE
        return rule.expectation(lambda x: np.square(self(x)), self.breakpoints)

    def __repr__(self) -> str:
        return f"Activation(name={self.name!r}, scale={self.scale:.6g})"


def _second_moment(
    f: ScalarFn, breakpoints: Sequence[float], rule: QuadratureRule
) -> Tuple[float, float]:
    """E f(X)^2，以及截断边界 ±half_width 处被积函数 f^2·pdf 的最大值。"""
    with np.errstate(over="ignore", invalid="ignore"):
        second_moment = rule.expectation(lambda x: np.square(f(x)), breakpoints)
        edges = np.array([-rule.half_width, rule.half_width])
        edge_mass = np.square(f(edges)) * normal_pdf(edges)
    return float(second_moment), float(np.max(edge_mass))


def is_square_integrable(
    f: ScalarFn,
    breakpoints: Sequence[float] = (),
    rule: Optional[QuadratureRule] = None,
) -> bool:
    """E f(X)^2 有限，且截断边界处的被积函数相对它可以忽略。"""
    second_moment, edge_mass = _second_moment(f, breakpoints, rule or DEFAULT_RULE)
    return _square_integrable(second_moment, edge_mass)


def _square_integrable(second_moment: float, edge_mass: float) -> bool:
    if not (np.isfinite(second_moment) and np.isfinite(edge_mass)):
        return False
    return edge_mass <= EDGE_MASS_TOL * second_moment


def normalization_constant(
    f: ScalarFn,
    breakpoints: Sequence[float] = (),
    rule: Optional[QuadratureRule] = None,
) -> float:
    """计算 C = sqrt(E f(X)^2)，积分在不可导点处切分。

    Raises:
        NotSquareIntegrableError: 积分非有限，或截断边界处的被积函数不可忽略
        DegenerateActivationError: f 在高斯测度下几乎处处为零
    """
    rule = rule or DEFAULT_RULE
    second_moment, edge_mass = _second_moment(f, breakpoints, rule)
    if not _square_integrable(second_moment, edge_mass):
        raise NotSquareIntegrableError(
            f"E f(X)^2 不是有限值或截断边界 ±{rule.half_width} 处的质量不可忽略，激活函数不是平方可积的"
        )
    if second_moment <= 0.0:
        raise DegenerateActivationError("E f(X)^2 = 0，无法归一化")
    return float(np.sqrt(second_moment))


def make_activation(
    name: str,
    f: ScalarFn,
    df: ScalarFn,
    breakpoints: Sequence[float] = (),
    scale: Optional[float] = None,
    params: Optional[Dict[str, float]] = None,
) -> Activation:
    """从原始函数构造归一化的 Activation。"""
    bps = tuple(sorted(set(float(b) for b in breakpoints)))
    if scale is None:
        scale = normalization_constant(f, bps)
    return Activation(name=name, f=f, df=df, breakpoints=bps, scale=scale, params=params or {})


# ---- 原始函数 ----

def _relu(x):
    return np.maximum(x, 0.0)


def _step(x):
    return (x > 0).astype(float)


def _leaky(slope: float):
    return (
        lambda x: np.where(x > 0, x, slope * x),
        lambda x: np.where(x > 0, 1.0, slope),
    )


def _elu(alpha: float):
    return (
        lambda x: np.where(x > 0, x, alpha * np.expm1(np.minimum(x, 0.0))),
        lambda x: np.where(x > 0, 1.0, alpha * np.exp(np.minimum(x, 0.0))),
    )


def _celu(alpha: float):
    return (
        lambda x: np.maximum(x, 0.0) + np.minimum(0.0, alpha * np.expm1(np.minimum(x, 0.0) / alpha)),
        lambda x: np.where(x > 0, 1.0, np.exp(np.minimum(x, 0.0) / alpha)),
    )


def _selu(x):
    return SELU_LAMBDA * np.where(x > 0, x, SELU_ALPHA * np.expm1(np.minimum(x, 0.0)))


def _dselu(x):
    return SELU_LAMBDA * np.where(x > 0, 1.0, SELU_ALPHA * np.exp(np.minimum(x, 0.0)))


def _gelu(x):
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def _dgelu(x):
    return 0.5 * (1.0 + erf(x / np.sqrt(2.0))) + x * normal_pdf(x)


def _dsigmoid(x):
    s = expit(x)
    return s * (1.0 - s)


def _dtanh(x):
    return 1.0 - np.square(np.tanh(x))


def hermite_basis(m: int) -> Activation:
    """纯多项式 he_m，本身已是单位能量。"""
    if m < 0:
        raise InvalidParameterError("hermite 阶数必须非负")

    def f(x):
        return he_all(m, x)[m]

    def df(x):
        if m == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.sqrt(m) * he_all(m - 1, x)[m - 1]

    return make_activation(f"hermite:{m}", f, df, scale=1.0, params={"m": float(m)})


def _parse_float(base: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError as e:
        raise InvalidParameterError(f"{base}: 参数 {raw!r} 不是数字") from e
    if not np.isfinite(value):
        raise InvalidParameterError(f"{base}: 参数必须有限")
    return value


def _build(base: str, param: Optional[str]) -> Activation:
    if base == "tanh":
        return make_activation("tanh", np.tanh, _dtanh)
    if base == "selu":
        return make_activation("selu", _selu, _dselu, breakpoints=(0.0,))
    if base == "relu":
        return make_activation("relu", _relu, _step, breakpoints=(0.0,))
    if base == "sigmoid":
        return make_activation("sigmoid", expit, _dsigmoid)
    if base == "exp":
        return make_activation("exp", np.exp, np.exp)
    if base == "gelu":
        return make_activation("gelu", _gelu, _dgelu)
    if base == "identity":
        return make_activation("identity", lambda x: np.asarray(x, dtype=float), np.ones_like)
    if base in ("elu", "celu"):
        alpha = 1.0 if param is None else _parse_float(base, param)
        if alpha <= 0:
            raise InvalidParameterError(f"{base}: alpha 必须为正")
        f, df = _elu(alpha) if base == "elu" else _celu(alpha)
        name = base if param is None else f"{base}:{alpha:g}"
        return make_activation(name, f, df, breakpoints=(0.0,), params={"alpha": alpha})
    if base == "leaky_relu":
        slope = DEFAULT_LEAKY_SLOPE if param is None else _parse_float(base, param)
        f, df = _leaky(slope)
        name = base if param is None else f"{base}:{slope:g}"
        return make_activation(name, f, df, breakpoints=(0.0,), params={"slope": slope})
    if base == "hermite":
        if param is None:
            raise InvalidParameterError("hermite 需要阶数，例如 hermite:3")
        try:
            m = int(param)
        except ValueError as e:
            raise InvalidParameterError(f"hermite: 阶数 {param!r} 不是整数") from e
        return hermite_basis(m)
    raise ActivationNotFoundError(f"未知激活函数: {base}")


KNOWN_ACTIVATIONS = (
    "tanh", "selu", "relu", "sigmoid", "exp", "gelu", "celu", "elu",
    "leaky_relu", "identity", "hermite",
)


@lru_cache(maxsize=128)
def lookup(name: str) -> Activation:
    """按 CLI 名称查找激活函数，例如 "selu"、"leaky_relu:0.2"、"hermite:3"。

    Raises:
        ActivationNotFoundError: 名称不在目录中
        InvalidParameterError: 参数格式错误
    """
    base, _, param = name.strip().lower().partition(":")
    if base not in KNOWN_ACTIVATIONS:
        raise ActivationNotFoundError(f"未知激活函数: {name}")
    activation = _build(base, param or None)
    logger.debug("加载激活函数", name=activation.name, scale=activation.scale)
    return activation


TABLE_NAMES = ("tanh", "selu", "relu", "sigmoid", "exp", "gelu", "celu", "elu")
CATALOG_NAMES = TABLE_NAMES + ("leaky_relu", "identity", "hermite:2", "hermite:3")


def catalog() -> List[Activation]:
    """返回目录中所有归一化激活函数。"""
    return [lookup(name) for name in CATALOG_NAMES]


def table_activations() -> List[Activation]:
    """常用激活函数汇总表中的八个激活函数，按表格顺序。"""
    return [lookup(name) for name in TABLE_NAMES]
