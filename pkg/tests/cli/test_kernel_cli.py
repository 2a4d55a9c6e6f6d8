"""测试 analyze、table、depth-threshold 命令。"""

import io
import json
import math

import jsonschema
import pandas as pd
import pytest
from click.testing import CliRunner

from kernel_dynamics.exceptions import FixedPointError
from kernel_dynamics.reporting import load_schema
from kernel_dynamics.run import main


class TestAnalyzeCommand:
    """测试 analyze 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def invoke(self, temp_dir, *args):
        return self.runner.invoke(main, ["--out-dir", str(temp_dir), "analyze", *args])

    def test_relu(self, temp_dir):
        result = self.invoke(temp_dir, "relu")

        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["name"] == "relu"
        assert payload["case"] == "case3"
        assert payload["alt_case"] == "case2"
        assert payload["alpha"] == pytest.approx(0.1817, abs=1e-4)
        jsonschema.validate(payload, load_schema("fixed_point_report"))

    def test_writes_report_and_manifest(self, temp_dir):
        result = self.invoke(temp_dir, "tanh")

        assert result.exit_code == 0
        report = json.loads((temp_dir / "analyze_tanh.json").read_text(encoding="utf-8"))
        assert report["case"] == "case1"
        manifest = json.loads((temp_dir / "analyze_tanh.manifest.json").read_text(encoding="utf-8"))
        jsonschema.validate(manifest, load_schema("run_manifest"))
        assert manifest["command"] == "analyze"
        assert manifest["config"]["activation"] == "tanh"
        assert manifest["config"]["K"] == 60

    def test_writes_expansion_csv(self, temp_dir):
        result = self.invoke(temp_dir, "relu")

        assert result.exit_code == 0
        path = temp_dir / "analyze_relu_expansion.csv"
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["k", "c_k", "c_k_squared", "cumulative_energy"]
        assert frame["k"].tolist() == list(range(61))
        assert frame.loc[0, "c_k_squared"] == pytest.approx(1 / math.pi, abs=1e-12)
        assert frame.loc[1, "c_k_squared"] == pytest.approx(0.5, abs=1e-12)
        assert frame["cumulative_energy"].is_monotonic_increasing
        assert 1 - frame["cumulative_energy"].iloc[-1] == pytest.approx(
            json.loads(result.output)["tail_mass"], abs=1e-12
        )
        manifest = json.loads((temp_dir / "analyze_relu.manifest.json").read_text(encoding="utf-8"))
        assert manifest["outputs"] == [str(temp_dir / "analyze_relu.json"), str(path)]

    def test_expansion_follows_truncation(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "--K", "10", "analyze", "tanh", "--residual", "0.5"]
        )

        assert result.exit_code == 0
        frame = pd.read_csv(temp_dir / "analyze_tanh_expansion.csv")
        assert len(frame) == 11
        assert frame.loc[frame["k"] % 2 == 0, "c_k"].abs().max() < 1e-12

    def test_residual(self, temp_dir):
        result = self.invoke(temp_dir, "exp", "--residual", "0.5")

        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["case"] == "case3"
        assert payload["alpha"] == pytest.approx(0.75 * 0.26424, abs=1e-4)

    def test_ln_after(self, temp_dir):
        result = self.invoke(temp_dir, "relu", "--norm-mode", "ln_after")

        assert result.exit_code == 0
        assert json.loads(result.output)["case"] == "case1"

    def test_hermite2(self, temp_dir):
        payload = json.loads(self.invoke(temp_dir, "hermite:2").output)

        assert payload["case"] == "case1"
        assert payload["rho_star"] == 0.0
        assert payload["alpha"] == pytest.approx(0.5, abs=1e-9)

    def test_parameterized_name(self, temp_dir):
        result = self.invoke(temp_dir, "leaky_relu:0.2")

        assert result.exit_code == 0
        assert (temp_dir / "analyze_leaky_relu_0p2.json").exists()

    def test_csv_output(self, temp_dir):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "--csv", "analyze", "gelu"])

        assert result.exit_code == 0
        frame = pd.read_csv(io.StringIO(result.output))
        assert frame.loc[0, "case"] == "case4"

    def test_unknown_activation(self, temp_dir):
        result = self.invoke(temp_dir, "swish")

        assert result.exit_code == 2
        assert "未知激活函数" in result.output

    def test_linear_activation(self, temp_dir):
        result = self.invoke(temp_dir, "identity")

        assert result.exit_code == 2

    def test_residual_out_of_range(self, temp_dir):
        result = self.invoke(temp_dir, "relu", "--residual", "1.5")

        assert result.exit_code == 2

    def test_numerical_failure(self, temp_dir, mocker):
        mocker.patch(
            "kernel_dynamics.cli.kernel_cli.find_fixed_point",
            side_effect=FixedPointError("找不到符号变化"),
        )
        result = self.invoke(temp_dir, "relu")

        assert result.exit_code == 3


class TestTableCommand:
    """测试 table 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_table(self, temp_dir, table_names):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "table"])

        assert result.exit_code == 0
        frame = pd.read_csv(io.StringIO(result.output))
        assert frame["activation"].tolist() == list(table_names)
        assert (temp_dir / "table.csv").read_bytes().count(b"\r\n") == len(table_names) + 1
        manifest = json.loads((temp_dir / "table.manifest.json").read_text(encoding="utf-8"))
        assert manifest["outputs"] == [str(temp_dir / "table.csv")]


class TestDepthThresholdCommand:
    """测试 depth-threshold 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def invoke(self, temp_dir, *args):
        return self.runner.invoke(main, ["--out-dir", str(temp_dir), "depth-threshold", *args])

    def test_sigmoid(self, temp_dir):
        result = self.invoke(temp_dir, "sigmoid")

        assert result.exit_code == 0
        assert result.output.strip() == "48"
        payload = json.loads((temp_dir / "depth_threshold_sigmoid.json").read_text(encoding="utf-8"))
        assert payload["applicable"] is True
        assert payload["confirmed_depth"] <= 48

    @pytest.mark.parametrize("name,rate,expected", [("sigmoid", "0.15", "47"), ("relu", "0.95", "1730")])
    def test_rate_override(self, temp_dir, name, rate, expected):
        result = self.invoke(temp_dir, name, "--rate", rate)

        assert result.exit_code == 0
        assert result.output.strip() == expected

    def test_not_applicable(self, temp_dir):
        result = self.invoke(temp_dir, "relu")

        assert result.exit_code == 0
        assert "not applicable (case3)" in result.output

    def test_json(self, temp_dir):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "--json", "depth-threshold", "tanh"])

        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["applicable"] is False
        assert payload["depth"] is None

    def test_invalid_epsilon(self, temp_dir):
        result = self.invoke(temp_dir, "sigmoid", "--epsilon", "2")

        assert result.exit_code == 2
