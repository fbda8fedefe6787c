"""
End-to-end tests of the command-line front end.
"""

import csv
import json
from pathlib import Path
from typing import Dict, List

import pytest

from app import cli
from app.checks import CheckResult, _guarded
from app.cli import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_TOLERANCE,
    ROTATION_COLUMNS,
    main,
)
from shared import defaults as DEFAULTS
from shared.config import RunConfig


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(DEFAULTS.CONFIG_PATH_ENV_VAR, raising=False)


def _read_csv(path: Path) -> List[Dict[str, str]]:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


class TestRotationCurveCommand:
    def test_flat_speed(self, tmp_path: Path) -> None:
        output = tmp_path / "curve.csv"
        argv = ["rotation-curve", "--samples", "32", "--output", str(output)]
        assert main(argv) == EXIT_OK
        header = output.read_text().splitlines()[0]
        assert header == ",".join(ROTATION_COLUMNS)
        rows = _read_csv(output)
        assert len(rows) == 32
        assert float(rows[0]["r"]) == 0.2
        assert float(rows[-1]["r"]) == pytest.approx(200.0, rel=1e-15)
        assert len({row["v_scale"] for row in rows}) == 1
        totals = [float(row["vsq_total"]) for row in rows]
        assert max(abs(v - 0.5) for v in totals) < 1e-13
        assert max(totals) - min(totals) < 1e-12

    def test_byte_identical_outputs(self, tmp_path: Path) -> None:
        outputs = []
        for run in ("a", "b"):
            csv_path = tmp_path / f"{run}.csv"
            svg_path = tmp_path / f"{run}.svg"
            argv = ["rotation-curve", "--samples", "16", "--output", str(csv_path)]
            assert main(argv + ["--plot", str(svg_path)]) == EXIT_OK
            outputs.append((csv_path.read_bytes(), svg_path.read_bytes()))
        assert outputs[0] == outputs[1]
        assert outputs[0][1].lstrip().startswith(b"<?xml")

    def test_single_sample(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["rotation-curve", "--samples", "1", "--rmin", "2"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("2,")

    def test_json_format(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["rotation-curve", "--samples", "3", "--grid", "linear", "--format", "json"]
        assert main(argv + ["--rmin", "1", "--rmax", "3"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["columns"] == list(ROTATION_COLUMNS)
        assert [row[0] for row in payload["rows"]] == [1.0, 2.0, 3.0]

    @pytest.mark.parametrize("value", ["0", "-1"])
    def test_non_positive_rmin(self, value: str) -> None:
        assert main(["rotation-curve", f"--rmin={value}"]) == EXIT_CONFIG

    def test_output_to_directory(self, tmp_path: Path) -> None:
        argv = ["rotation-curve", "--samples", "4", "--output", str(tmp_path)]
        assert main(argv) == EXIT_IO


class TestResidualsCommand:
    def test_default_configuration_passes(
        self, capsys: pytest.CaptureFixture[str]
    ) -> None:
        assert main(["residuals"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert "radial_linear" in report
        assert "radial_nonlinear" in report
        linear = ("radial_linear", "stationary_linear", "hj_general", "nls", "hj3_first")
        assert max(report[name] for name in linear) < 1e-8
        assert report["virial"] < DEFAULTS.TOLERANCE_VIRIAL

    def test_wrong_energy_fails(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["residuals", "--samples", "16", "--energy-factor", "1.1"]
        assert main(argv) == EXIT_TOLERANCE
        report = json.loads(capsys.readouterr().out)
        assert report["radial_linear"] > 1e-3

    def test_json_regardless_of_format(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["residuals", "--samples", "8", "--format", "csv"]) == EXIT_OK
        assert isinstance(json.loads(capsys.readouterr().out), dict)

    def test_full_default_grid_reaches_far_tail(
        self, capsys: pytest.CaptureFixture[str]
    ) -> None:
        assert main(["residuals", "--rmax", "200", "--samples", "4"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["hj3_first"] < DEFAULTS.TOLERANCE_LINEAR_RESIDUAL

    def test_arithmetic_failure_in_check_is_reported(self) -> None:
        def failing() -> List[CheckResult]:
            raise ZeroDivisionError("float division by zero")

        results = _guarded("linear", failing)
        assert [result.name for result in results] == ["linear"]
        assert not results[0].passed

    def test_arithmetic_failure_maps_to_exit_code(
        self, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        def failing(config: RunConfig) -> int:
            raise OverflowError("math range error")

        monkeypatch.setitem(cli._COMMANDS, "virial", failing)
        assert main(["virial"]) == EXIT_CONFIG


class TestOtherCommands:
    def test_ground_state(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["ground-state", "--format", "json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["E0_paper"] == 0.5
        assert report["E0_oracle"] == pytest.approx(0.5, rel=1e-14)
        assert report["r0"] == 2.0
        assert report["orbital_speed"] == pytest.approx(0.7071067811865476)
        assert 0.6 < report["nonlinear_r_max"] < 0.75

    def test_ground_state_ratio(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["ground-state", "--format", "json", "--mass", "3"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["E0_ratio"] == pytest.approx(3.0, rel=1e-12)

    def test_virial(self, tmp_path: Path) -> None:
        output = tmp_path / "virial.csv"
        assert main(["virial", "--samples", "16", "--output", str(output)]) == EXIT_OK
        rows = _read_csv(output)
        assert len(rows) == 16
        assert max(abs(float(row["residual"])) for row in rows) < DEFAULTS.TOLERANCE_VIRIAL

    def test_ei(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["ei", "1", "-1"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "x,ei"
        assert float(lines[1].split(",")[1]) == pytest.approx(1.8951178163559368)
        assert float(lines[2].split(",")[1]) == pytest.approx(-0.21938393439552029)

    def test_ei_at_zero(self) -> None:
        assert main(["ei", "0"]) == EXIT_CONFIG


class TestConfiguration:
    def test_config_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "run.cfg"
        path.write_text("# halved scale\nlambda_scale=0.5\nformat=json\n")
        assert main(["ground-state", "--config", str(path)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["r0"] == 0.5

    def test_flag_overrides_file(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        path = tmp_path / "run.cfg"
        path.write_text("lambda_scale=0.5\nformat=json\n")
        assert main(["ground-state", "--config", str(path), "--lambda", "1"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["r0"] == 2.0

    def test_environment_config(
        self,
        tmp_path: Path,
        monkeypatch: pytest.MonkeyPatch,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        path = tmp_path / "env.cfg"
        path.write_text("gm=4.0\nformat=json\n")
        monkeypatch.setenv(DEFAULTS.CONFIG_PATH_ENV_VAR, str(path))
        assert main(["ground-state"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["r0"] == 0.5

    def test_malformed_config(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.cfg"
        path.write_text("lambda_scale 0.5\n")
        assert main(["rotation-curve", "--config", str(path)]) == EXIT_CONFIG

    def test_unknown_key(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.cfg"
        path.write_text("speed_of_light=1\n")
        assert main(["rotation-curve", "--config", str(path)]) == EXIT_CONFIG

    def test_missing_command(self) -> None:
        assert main([]) == EXIT_CONFIG

    def test_log_file(self, tmp_path: Path) -> None:
        log_file = tmp_path / "run.log"
        argv = ["residuals", "--samples", "8", "--energy-factor", "1.1"]
        argv += ["--log-file", str(log_file), "--output", str(tmp_path / "r.json")]
        assert main(argv) == EXIT_TOLERANCE
        assert "residual above tolerance" in log_file.read_text()
