"""归一化 Hermite 多项式 he_k = He_k / sqrt(k!)。"""

import numpy as np


def he_all(max_degree: int, x) -> np.ndarray:
    """一次性计算 he_0..he_K 在 x 处的值。

    使用概率论 Hermite 多项式的三项递推，并把 1/sqrt(k!) 折进递推：
        he_{k+1}(x) = (x he_k(x) - sqrt(k) he_{k-1}(x)) / sqrt(k+1)
    不显式计算阶乘，k <= 200、|x| <= 15 时数值稳定。

    Args:
        max_degree: 最高阶数 K (>= 0)
        x: 标量或数组

    Returns:
        形状为 (K+1, *x.shape) 的数组
    """
    if max_degree < 0:
        raise ValueError("max_degree 必须非负")
    x = np.asarray(x, dtype=float)
    out = np.empty((max_degree + 1,) + x.shape)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = x
    for k in range(1, max_degree):
        out[k + 1] = (x * out[k] - np.sqrt(k) * out[k - 1]) / np.sqrt(k + 1)
    return out


def he_eval(k: int, x):
    """he_k(x)，标量输入返回 float。"""
    values = he_all(k, x)[k]
    return float(values) if values.ndim == 0 else values
