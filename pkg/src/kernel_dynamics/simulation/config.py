"""蒙特卡洛仿真配置。"""

from dataclasses import asdict, dataclass
from typing import Optional

from ..exceptions import InvalidParameterError
from ..hermite.expansion import DEFAULT_TRUNCATION
from ..kernel.transforms import NORM_MODES

WEIGHT_DISTS = ("gaussian", "uniform_unit_var", "rademacher")


@dataclass(frozen=True)
class SimConfig:
    """有限宽度随机网络的仿真配置。

    Attributes:
        activation: 激活函数名称（目录名）
        width: 宽度 d ≥ 2
        depth: 层数 L ≥ 1
        rho0: 输入对的初始核
        trials: 独立试验次数 M
        weight_dist: 权重分布，gaussian / uniform_unit_var / rademacher
        residual: 残差强度 r ∈ [0, 1]
        norm_mode: 归一化模式，None 表示不使用
        seed: 随机种子
        K: 平均场参照使用的 Hermite 截断阶数
    """

    activation: str
    width: int
    depth: int
    rho0: float
    trials: int = 32
    weight_dist: str = "gaussian"
    residual: float = 0.0
    norm_mode: Optional[str] = None
    seed: int = 0
    K: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.width < 2:
            raise InvalidParameterError(f"宽度 d 必须 ≥ 2: {self.width}")
        if self.depth < 1:
            raise InvalidParameterError(f"层数 L 必须 ≥ 1: {self.depth}")
        if self.trials < 1:
            raise InvalidParameterError(f"试验次数 M 必须 ≥ 1: {self.trials}")
        if not abs(self.rho0) <= 1.0:
            raise InvalidParameterError(f"rho0 必须在 [-1, 1] 内: {self.rho0}")
        if not 0.0 <= self.residual <= 1.0:
            raise InvalidParameterError(f"残差强度 r 必须在 [0, 1] 内: {self.residual}")
        if self.weight_dist not in WEIGHT_DISTS:
            raise InvalidParameterError(
                f"未知权重分布: {self.weight_dist}，可选 {', '.join(WEIGHT_DISTS)}"
            )
        if self.norm_mode is not None and self.norm_mode not in NORM_MODES:
            raise InvalidParameterError(
                f"未知归一化模式: {self.norm_mode}，可选 {', '.join(NORM_MODES)}"
            )
        if self.seed < 0:
            raise InvalidParameterError(f"seed 必须非负: {self.seed}")

    def to_dict(self) -> dict:
        return asdict(self)
