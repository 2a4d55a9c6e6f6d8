"""测试配置和通用 fixtures。"""

import shutil
import tempfile
from pathlib import Path
from typing import Generator

import pytest

from kernel_dynamics.activations import CATALOG_NAMES, TABLE_NAMES
from kernel_dynamics.kernel import KernelMap, build_kernel_map
from kernel_dynamics.log_utils import configure_structlog


@pytest.fixture(scope="session", autouse=True)
def configure_logging():
    """配置测试日志。"""
    configure_structlog(log_level=30)  # WARNING level for tests


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """创建临时目录。"""
    temp_path = Path(tempfile.mkdtemp())
    try:
        yield temp_path
    finally:
        shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture(scope="session")
def kernel_maps() -> dict:
    """目录中每个激活函数的核映射（K=60），整个会话共享。"""
    return {name: build_kernel_map(name) for name in CATALOG_NAMES}


@pytest.fixture
def relu_map(kernel_maps) -> KernelMap:
    return kernel_maps["relu"]


@pytest.fixture
def table_names():
    return TABLE_NAMES
