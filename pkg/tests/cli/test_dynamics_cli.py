"""测试 iterate、cobweb、ode、figure 命令。"""

import io
import json

import pandas as pd
import pytest
from click.testing import CliRunner

from kernel_dynamics.run import main


def read_csv(text):
    return pd.read_csv(io.StringIO(text))


class TestIterateCommand:
    """测试 iterate 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_hermite2(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "iterate", "hermite:2", "--rho0", "0.5", "--depth", "3"]
        )

        assert result.exit_code == 0
        frame = read_csv(result.output)
        assert list(frame.columns) == ["ell_or_t", "rho", "bound", "functional_name"]
        assert frame["rho"].tolist() == pytest.approx([0.5, 0.25, 0.0625, 0.00390625])
        assert (temp_dir / "iterate_hermite_2.csv").exists()
        assert (temp_dir / "iterate_hermite_2.manifest.json").exists()

    def test_hermite3_negative(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "iterate", "hermite:3", "--rho0", "-0.5", "--depth", "4"]
        )

        assert result.exit_code == 0
        rho = read_csv(result.output)["rho"].tolist()
        assert rho[:3] == pytest.approx([-0.5, -0.125, -0.001953125])

    def test_svg(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "--svg", "iterate", "relu", "--rho0", "0.2"]
        )

        assert result.exit_code == 0
        assert (temp_dir / "iterate_relu.svg").read_text(encoding="utf-8").startswith("<svg")
        manifest = json.loads((temp_dir / "iterate_relu.manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["outputs"]) == 2

    def test_json_output(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "--json", "iterate", "exp", "--rho0", "0", "--depth", "2"]
        )

        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert rows[1]["rho"] == pytest.approx(0.36788, abs=1e-5)

    def test_env_out_dir(self, temp_dir):
        result = self.runner.invoke(
            main, ["iterate", "tanh", "--rho0", "0.5", "--depth", "2"], env={"KD_OUT_DIR": str(temp_dir)}
        )

        assert result.exit_code == 0
        assert (temp_dir / "iterate_tanh.csv").exists()

    def test_rho0_out_of_range(self, temp_dir):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "iterate", "relu", "--rho0", "1.5"])

        assert result.exit_code == 2

    def test_rho0_required(self, temp_dir):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "iterate", "relu"])

        assert result.exit_code == 2


class TestCobwebCommand:
    """测试 cobweb 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_pairs(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "cobweb", "hermite:2", "--rho0", "0.5", "--steps", "3"]
        )

        assert result.exit_code == 0
        frame = read_csv(result.output)
        assert list(frame.columns) == ["step", "rho", "rho_next"]
        assert len(frame) == 3
        assert frame["rho_next"].iloc[0] == pytest.approx(0.25)


class TestOdeCommand:
    """测试 ode 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_fixed_steps(self, temp_dir):
        result = self.runner.invoke(
            main,
            ["--out-dir", str(temp_dir), "ode", "tanh", "--rho0", "0.9", "--t-max", "1", "--dt", "0.1",
             "--no-early-stop"],
        )

        assert result.exit_code == 0
        frame = read_csv(result.output)
        assert len(frame) == 11
        assert frame["ell_or_t"].iloc[-1] == pytest.approx(1.0)
        assert frame["rho"].is_monotonic_decreasing
        assert (temp_dir / "ode_tanh.csv").exists()

    def test_invalid_dt(self, temp_dir):
        result = self.runner.invoke(main, ["--out-dir", str(temp_dir), "ode", "tanh", "--rho0", "0.5", "--dt", "0"])

        assert result.exit_code == 2


class TestFigureCommand:
    """测试 figure 命令。"""

    def setup_method(self):
        """设置测试。"""
        self.runner = CliRunner()

    def test_single_activation(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "figure", "relu", "--rho0", "0.5", "--depth", "5"]
        )

        assert result.exit_code == 0
        for panel in ["activation", "kernel_map", "sequence", "distance"]:
            path = temp_dir / f"figure_relu_{panel}.csv"
            assert path.exists()
            assert str(path) in result.output
        manifest = json.loads((temp_dir / "figure.manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["outputs"]) == 4
        sequence = pd.read_csv(temp_dir / "figure_relu_sequence.csv")
        assert len(sequence) == 6

    def test_leaky_sweep(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "figure", "tanh", "--leaky-sweep", "--rho0", "0.5", "--depth", "3"]
        )

        assert result.exit_code == 0
        assert (temp_dir / "figure_leaky_relu_0p01_distance.csv").exists()
        assert (temp_dir / "figure_leaky_relu_0p5_distance.csv").exists()
        manifest = json.loads((temp_dir / "figure.manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["outputs"]) == 20

    def test_svg(self, temp_dir):
        result = self.runner.invoke(
            main, ["--out-dir", str(temp_dir), "--svg", "figure", "gelu", "--rho0", "0.5", "--depth", "5"]
        )

        assert result.exit_code == 0
        assert (temp_dir / "figure_gelu_distance.svg").exists()
        manifest = json.loads((temp_dir / "figure.manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["outputs"]) == 8
