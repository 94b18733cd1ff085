"""CLI behavior: commands, exit codes, report files and figures."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from greenval.cli import main
from greenval.io import emit_case_study, load_bundled


@pytest.fixture()
def sicily_file(tmp_path):
    path = tmp_path / "sicily.json"
    path.write_bytes(emit_case_study(load_bundled("sicily")))
    return path


def run_cli(argv):
    """Run the CLI in-process, capturing stdout bytes."""
    import contextlib
    import io as stringio

    buffer = stringio.BytesIO()

    class _Stdout:
        buffer = None

        def write(self, text):
            buffer.write(text.encode())

        def flush(self):
            pass

    fake = _Stdout()
    fake.buffer = buffer
    with contextlib.redirect_stdout(fake):
        code = main(argv)
    return code, buffer.getvalue()


class TestEvaluateCommand:
    def test_stdout_json_has_both_scenarios(self, sicily_file):
        code, out = run_cli(["evaluate", str(sicily_file), "--discount-rate", "0.05", "--format", "json"])
        assert code == 0
        body = json.loads(out)
        assert {s["role"] for s in body["scenarios"]} == {"baseline", "alternative"}

    def test_bundled_id_accepted(self):
        code, out = run_cli(["evaluate", "sicily"])
        assert code == 0
        assert json.loads(out)["dataset"] == "sicily"

    def test_output_file_and_figure(self, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run_cli(["evaluate", "sicily", "--output", str(out_path)])
        assert code == 0
        assert out_path.exists()
        figure = out_path.with_suffix(".png")
        assert figure.exists() and figure.stat().st_size > 0

    def test_no_plot_skips_figure(self, tmp_path):
        out_path = tmp_path / "report.json"
        code, _ = run_cli(["evaluate", "sicily", "--output", str(out_path), "--no-plot"])
        assert code == 0
        assert not out_path.with_suffix(".png").exists()

    def test_item_override_changes_costs(self):
        _, base = run_cli(["evaluate", "sicily"])
        _, swapped = run_cli(["evaluate", "sicily", "--set", "ordinary_maintenance=3000"])
        pv = lambda raw: [s["pv_costs"] for s in json.loads(raw)["scenarios"] if s["role"] == "alternative"][0]
        assert pv(swapped) == pytest.approx(pv(base) - 2000.0)

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["forecast", "sicily", "--samples", "50", "--seed", "5", "--output", str(a), "--no-plot"])
        run_cli(["forecast", "sicily", "--samples", "50", "--seed", "5", "--output", str(b), "--no-plot"])
        assert a.read_bytes() == b.read_bytes()


class TestCompareCommand:
    def test_recommends_wetland_case(self):
        code, out = run_cli(["compare", "emilia-romagna"])
        assert code == 0
        assert json.loads(out)["recommended"] == "with-sfcw"

    def test_csv_format(self):
        code, out = run_cli(["compare", "emilia-romagna", "--format", "csv"])
        assert code == 0
        assert "-74.90" in out.decode()


class TestSweepCommand:
    def test_three_cell_grid(self):
        code, out = run_cli(["sweep", "sicily", "--param", "discount_rate=0.025,0.05,0.075"])
        assert code == 0
        assert len(json.loads(out)["cells"]) == 3

    def test_range_syntax(self):
        code, out = run_cli(["sweep", "sicily", "--param", "carbon_price=30:90:3"])
        assert code == 0
        body = json.loads(out)
        assert body["params"][0]["values"] == [30.0, 60.0, 90.0]

    def test_sweep_without_params_fails(self):
        code, _ = run_cli(["sweep", "sicily"])
        assert code == 1

    def test_unknown_target_fails(self):
        code, _ = run_cli(["sweep", "sicily", "--param", "inflation=0.02"])
        assert code == 1

    def test_figure_rendered(self, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, _ = run_cli([
            "sweep", "sicily", "--param", "discount_rate=0.025,0.05,0.075",
            "--format", "csv", "--output", str(out_path),
        ])
        assert code == 0
        assert out_path.with_suffix(".png").exists()


class TestForecastCommand:
    def test_csv_band(self, tmp_path):
        out_path = tmp_path / "band.csv"
        code, _ = run_cli([
            "forecast", "sicily", "--samples", "40", "--seed", "1",
            "--format", "csv", "--output", str(out_path),
        ])
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "year,mean,lower95,upper95"
        assert len(lines) == 32
        assert out_path.with_suffix(".png").exists()

    def test_scenario_flag(self):
        code, out = run_cli(["forecast", "emilia-romagna", "--scenario", "with-sfcw", "--samples", "20"])
        assert code == 0
        assert json.loads(out)["scenario_id"] == "with-sfcw"

    def test_unknown_scenario_fails(self):
        code, _ = run_cli(["forecast", "sicily", "--scenario", "nope", "--samples", "5"])
        assert code == 1

    def test_bad_samples_fails(self):
        code, _ = run_cli(["forecast", "sicily", "--samples", "0"])
        assert code == 1


class TestValidateCommand:
    def test_bundled_dataset_validates(self):
        code, out = run_cli(["validate", "emilia-romagna"])
        assert code == 0
        assert json.loads(out)["warnings"] == []

    def test_corrupt_file_exit_one(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        code, _ = run_cli(["validate", str(bad)])
        assert code == 1

    def test_missing_dataset_exit_one(self):
        code, _ = run_cli(["validate", "/does/not/exist.json"])
        assert code == 1


class TestExitCodes:
    """Exit codes through the real console entry point."""

    def run(self, *argv):
        return subprocess.run(
            [sys.executable, "-m", "greenval.cli", *argv],
            capture_output=True,
        )

    def test_success_is_zero(self, sicily_file):
        result = self.run("evaluate", str(sicily_file))
        assert result.returncode == 0

    def test_validation_error_is_one(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": "9.9"}')
        result = self.run("evaluate", str(bad))
        assert result.returncode == 1
        assert b"error" in result.stderr

    def test_usage_error_is_two(self):
        assert self.run("evaluate").returncode == 2
        assert self.run("frobnicate", "sicily").returncode == 2
        assert self.run("evaluate", "sicily", "--bogus-flag").returncode == 2
