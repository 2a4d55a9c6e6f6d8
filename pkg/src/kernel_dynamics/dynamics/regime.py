"""收敛速率的回归判别：几何衰减（log 距离线性）或多项式衰减（c/ℓ）。"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import structlog
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from ..exceptions import InvalidParameterError

logger = structlog.get_logger()

REGIME_GEOMETRIC = "geometric"
REGIME_RECIPROCAL = "reciprocal"
REGIMES = (REGIME_GEOMETRIC, REGIME_RECIPROCAL)
# 低于该值视为已下溢，不参与拟合
UNDERFLOW_FLOOR = 1e-10
MIN_POINTS = 3


@dataclass(frozen=True)
class DecayFit:
    """线性回归结果。geometric 拟合 log(d) ~ ℓ，reciprocal 拟合 1/d ~ ℓ。"""

    regime: str
    slope: float
    intercept: float
    r2: float
    n_points: int

    @property
    def rate(self) -> Optional[float]:
        """geometric 情形下的每层收缩因子 exp(slope)。"""
        return float(np.exp(self.slope)) if self.regime == REGIME_GEOMETRIC else None


def decay_fit(
    distances: Sequence[float],
    regime: str = REGIME_GEOMETRIC,
    depths: Optional[Sequence[float]] = None,
    floor: float = UNDERFLOW_FLOOR,
) -> DecayFit:
    """对距离序列 |ρ_ℓ - ρ*| 做线性回归。

    Args:
        distances: 每层到不动点的距离
        regime: "geometric" 或 "reciprocal"
        depths: 对应深度，缺省为 0..n-1
        floor: 只使用大于该值的点（下溢之前的区间）
    """
    if regime not in REGIMES:
        raise InvalidParameterError(f"未知衰减类型: {regime}")
    d = np.asarray(distances, dtype=float)
    ell = np.arange(len(d), dtype=float) if depths is None else np.asarray(depths, dtype=float)
    keep = np.isfinite(d) & (d > floor)
    if int(keep.sum()) < MIN_POINTS:
        raise InvalidParameterError(f"可用于拟合的点不足 {MIN_POINTS} 个")

    X = ell[keep].reshape(-1, 1)
    y = np.log(d[keep]) if regime == REGIME_GEOMETRIC else 1.0 / d[keep]
    model = LinearRegression().fit(X, y)
    r2 = float(r2_score(y, model.predict(X)))
    return DecayFit(
        regime=regime,
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=r2,
        n_points=int(keep.sum()),
    )


def classify_regime(
    distances: Sequence[float],
    depths: Optional[Sequence[float]] = None,
    floor: float = UNDERFLOW_FLOOR,
) -> DecayFit:
    """两种拟合中 R² 较高者。"""
    fits = [decay_fit(distances, regime, depths, floor) for regime in REGIMES]
    best = max(fits, key=lambda f: f.r2)
    logger.debug("收敛类型判别", regime=best.regime, r2=best.r2, n_points=best.n_points)
    return best
