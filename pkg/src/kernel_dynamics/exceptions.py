"""错误类型 - 库内所有异常的统一层级。"""

from typing import Any, Dict, Optional


class KernelDynamicsError(Exception):
    """库内所有错误的基类。"""


class ActivationNotFoundError(KernelDynamicsError, KeyError):
    """激活函数名称不在目录中。"""

    def __str__(self) -> str:
        # KeyError 默认会给消息加引号
        return str(self.args[0]) if self.args else ""


class InvalidParameterError(KernelDynamicsError, ValueError):
    """参数违反前置条件。"""


DomainError = InvalidParameterError


class NotSquareIntegrableError(KernelDynamicsError, ValueError):
    """激活函数在高斯测度下不是平方可积的。"""


class DegenerateActivationError(KernelDynamicsError, ValueError):
    """常数激活函数（全部能量集中在 c_0）。"""


class LinearActivationError(KernelDynamicsError, ValueError):
    """定理要求非线性激活函数。"""


class NumericalError(KernelDynamicsError, ArithmeticError):
    """数值计算失败。"""


class FixedPointError(NumericalError):
    """二分区间内找不到符号变化。"""


class IntegrationError(NumericalError):
    """ODE 积分出现非有限状态。"""

    def __init__(self, message: str, last_t: float):
        super().__init__(message)
        self.last_t = last_t


class DegenerateTrialError(NumericalError):
    """单次试验中 LN/RN 分母为零。"""


class SimulationError(NumericalError):
    """蒙特卡洛运行失败。"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
