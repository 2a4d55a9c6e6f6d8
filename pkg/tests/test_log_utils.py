"""测试日志配置。"""

import logging

import pytest
import structlog

from kernel_dynamics.log_utils import configure_structlog, resolve_log_level


class TestResolveLogLevel:
    """测试日志级别解析。"""

    @pytest.mark.parametrize(
        "value,expected",
        [("DEBUG", logging.DEBUG), ("warning", logging.WARNING), (logging.ERROR, logging.ERROR)],
    )
    def test_explicit(self, value, expected):
        assert resolve_log_level(value) == expected

    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv("LOG_LEVEL", "error")
        assert resolve_log_level() == logging.ERROR

    def test_default(self, monkeypatch):
        monkeypatch.delenv("LOG_LEVEL", raising=False)
        assert resolve_log_level() == logging.INFO

    def test_unknown(self):
        with pytest.raises(ValueError):
            resolve_log_level("LOUD")


class TestConfigureStructlog:
    """测试 structlog 配置。"""

    def test_sets_root_level(self):
        try:
            configure_structlog("ERROR")
            assert logging.getLogger().level == logging.ERROR
            assert structlog.is_configured()
        finally:
            configure_structlog(logging.WARNING)
