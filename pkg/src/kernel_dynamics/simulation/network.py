"""随机 MLP 的逐层前向传播。

每层权重现采现用，不保留整个网络：
    h^ℓ = sqrt(1 - r²) ψ(W^ℓ h^{ℓ-1} / sqrt(d)) + r P^ℓ h^{ℓ-1} / sqrt(d)
ψ 为激活函数，可在其前或后接 LayerNorm / RMSNorm。
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..activations.catalog import Activation, lookup
from ..exceptions import DegenerateTrialError, InvalidParameterError
from .config import WEIGHT_DISTS, SimConfig

SQRT3 = np.sqrt(3.0)
NORM_EPS = 1e-12

SeedLike = Union[int, Sequence[int], np.random.Generator, None]


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def avg_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """平均内积 ⟨a, b⟩_avg = (1/d) Σ a_i b_i，按列计算。"""
    return np.mean(a * b, axis=0)


def sample_weights(rng: np.random.Generator, dist: str, shape: Tuple[int, ...]) -> np.ndarray:
    """零均值、单位方差的独立同分布权重。

    uniform_unit_var 取 U[-√3, √3]（方差为 1，而不是 U[-1, 1] 的 1/3）。
    """
    if dist == "gaussian":
        return rng.standard_normal(shape)
    if dist == "uniform_unit_var":
        return rng.uniform(-SQRT3, SQRT3, size=shape)
    if dist == "rademacher":
        return rng.integers(0, 2, size=shape) * 2.0 - 1.0
    raise InvalidParameterError(f"未知权重分布: {dist}，可选 {', '.join(WEIGHT_DISTS)}")


def make_input_pair(d: int, rho0: float, seed: SeedLike = None) -> Tuple[np.ndarray, np.ndarray]:
    """构造样本统计量精确的输入对：⟨x,x⟩ = ⟨y,y⟩ = 1，⟨x,y⟩ = rho0（平均内积）。

    Args:
        d: 维数 d ≥ 2
        rho0: 目标相关，|rho0| ≤ 1
        seed: 随机种子或 Generator
    """
    if d < 2:
        raise InvalidParameterError(f"维数 d 必须 ≥ 2: {d}")
    if not abs(rho0) <= 1.0:
        raise InvalidParameterError(f"rho0 必须在 [-1, 1] 内: {rho0}")
    rng = _as_rng(seed)
    g = rng.standard_normal((d, 2))
    x = g[:, 0] / np.sqrt(np.mean(g[:, 0] ** 2))
    if abs(rho0) == 1.0:
        return x, rho0 * x

    v = g[:, 1] - np.mean(g[:, 1] * x) * x
    v = v / np.sqrt(np.mean(v ** 2))
    y = rho0 * x + np.sqrt(1.0 - rho0 * rho0) * v
    return x, y


def layer_norm(h: np.ndarray) -> np.ndarray:
    """按列减去特征均值再除以（有偏）标准差。"""
    centered = h - np.mean(h, axis=0)
    std = np.sqrt(np.mean(centered ** 2, axis=0))
    if np.any(std <= NORM_EPS):
        raise DegenerateTrialError("LayerNorm 分母为零")
    return centered / std


def rms_norm(h: np.ndarray) -> np.ndarray:
    """按列除以均方根。"""
    rms = np.sqrt(np.mean(h ** 2, axis=0))
    if np.any(rms <= NORM_EPS):
        raise DegenerateTrialError("RMSNorm 分母为零")
    return h / rms


_NORMS = {"ln": layer_norm, "rn": rms_norm}


def _normalize(h: np.ndarray, mode: Optional[str], position: str) -> np.ndarray:
    if mode is None:
        return h
    kind, _, where = mode.partition("_")
    return _NORMS[kind](h) if where == position else h


def layer_step(
    config: SimConfig, act: Activation, h: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """一层前向传播，h 的每一列是一个输入的表示。"""
    d = config.width
    w = sample_weights(rng, config.weight_dist, (d, d))
    z = _normalize(w @ h / np.sqrt(d), config.norm_mode, "before")
    out = _normalize(act(z), config.norm_mode, "after")
    if config.residual > 0.0:
        p = sample_weights(rng, config.weight_dist, (d, d))
        r = config.residual
        out = np.sqrt(1.0 - r * r) * out + r * (p @ h) / np.sqrt(d)
    return out


@dataclass(frozen=True)
class ForwardRecord:
    """单次试验的逐层记录，长度 L+1（含输入层）。"""

    kernels: np.ndarray
    norms_x: np.ndarray
    norms_y: np.ndarray


def forward(
    config: SimConfig,
    x: np.ndarray,
    y: np.ndarray,
    rng: SeedLike = None,
) -> ForwardRecord:
    """把一对输入推过一个随机网络，记录每层的 ⟨h(x), h(y)⟩_avg。

    Raises:
        DegenerateTrialError: LN/RN 分母为零
    """
    rng = _as_rng(rng)
    act = lookup(config.activation)
    h = np.column_stack([x, y])
    kernels = np.empty(config.depth + 1)
    norms = np.empty((config.depth + 1, 2))
    for ell in range(config.depth + 1):
        if ell > 0:
            h = layer_step(config, act, h, rng)
        if not np.all(np.isfinite(h)):
            raise DegenerateTrialError(f"第 {ell} 层出现非有限值")
        kernels[ell] = avg_inner(h[:, 0], h[:, 1])
        norms[ell] = avg_inner(h, h)
    return ForwardRecord(kernels=kernels, norms_x=norms[:, 0], norms_y=norms[:, 1])


def propagate(config: SimConfig, inputs: np.ndarray, rng: SeedLike = None) -> np.ndarray:
    """把 n 列输入矩阵推过同一个随机网络，返回最后一层表示 (d, n)。"""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[0] != config.width:
        raise InvalidParameterError(f"输入矩阵形状必须为 ({config.width}, n)")
    rng = _as_rng(rng)
    act = lookup(config.activation)
    h = inputs
    for _ in range(config.depth):
        h = layer_step(config, act, h, rng)
    return h
