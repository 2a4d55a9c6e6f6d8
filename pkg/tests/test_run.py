"""测试 run.py 模块 - CLI 入口点。"""

from unittest.mock import patch

from click.testing import CliRunner

from kernel_dynamics import __version__
from kernel_dynamics.run import main, run_entry

COMMANDS = ["analyze", "table", "iterate", "cobweb", "ode", "simulate", "depth-threshold", "figure"]


class TestMainCLI:
    """测试主 CLI 命令组。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_main_help(self):
        """测试主 CLI 帮助信息。"""
        result = self.runner.invoke(main, ["--help"])

        assert result.exit_code == 0
        assert "KernelDynamics" in result.output
        for command in COMMANDS:
            assert command in result.output

    def test_main_no_command(self):
        """测试没有提供子命令时的行为。"""
        result = self.runner.invoke(main, [])

        assert result.exit_code in (0, 2)
        assert "Usage:" in result.output

    def test_main_invalid_command(self):
        """测试无效的子命令。"""
        result = self.runner.invoke(main, ["invalid_command"])

        assert result.exit_code != 0
        assert "No such command" in result.output

    def test_version(self):
        result = self.runner.invoke(main, ["--version"])

        assert result.exit_code == 0
        assert __version__ in result.output

    def test_invalid_log_level(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "--log-level", "LOUD", "table"]
        )

        assert result.exit_code == 2

    def test_invalid_truncation(self):
        result = self.runner.invoke(main, ["--K", "0", "table"])

        assert result.exit_code == 2

    def test_subcommand_help(self):
        """每个子命令都有帮助信息。"""
        for command in COMMANDS:
            result = self.runner.invoke(main, [command, "--help"])
            assert result.exit_code == 0, command
            assert "Usage:" in result.output


class TestRunEntry:
    """测试程序入口点。"""

    @patch("kernel_dynamics.run.main")
    def test_run_entry_calls_main(self, mock_main):
        """测试 run_entry 调用 main 函数。"""
        run_entry()

        mock_main.assert_called_once_with()
