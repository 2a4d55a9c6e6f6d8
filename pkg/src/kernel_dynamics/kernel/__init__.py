"""核映射模块 - 核映射、不动点分类、收缩率与层变换。"""

from .kernel_map import (
    KernelDerivative,
    KernelMap,
    build_kernel_map,
    check_rho,
    fold_tail,
    kernel_derivative,
    kernel_eval,
    kernel_oracle,
)
from .fixed_point import (
    CASE_GEOMETRIC,
    CASE_INTERIOR,
    CASE_ORTHOGONAL,
    CASE_POLYNOMIAL,
    TOL_ONE,
    TOL_ZERO,
    ContractionBound,
    DepthThreshold,
    FixedPointReport,
    contraction_bound,
    depth_threshold,
    depth_threshold_from_rate,
    distance_bound,
    find_fixed_point,
    functional_value,
    gram_min_eigenvalue,
    theory_envelope,
)
from .transforms import NORM_MODES, normalization_transform, residual_transform

__all__ = [
    "CASE_GEOMETRIC",
    "CASE_INTERIOR",
    "CASE_ORTHOGONAL",
    "CASE_POLYNOMIAL",
    "NORM_MODES",
    "TOL_ONE",
    "TOL_ZERO",
    "ContractionBound",
    "DepthThreshold",
    "FixedPointReport",
    "KernelDerivative",
    "KernelMap",
    "build_kernel_map",
    "check_rho",
    "contraction_bound",
    "depth_threshold",
    "depth_threshold_from_rate",
    "distance_bound",
    "find_fixed_point",
    "fold_tail",
    "functional_value",
    "gram_min_eigenvalue",
    "kernel_derivative",
    "kernel_eval",
    "kernel_oracle",
    "normalization_transform",
    "residual_transform",
    "theory_envelope",
]
