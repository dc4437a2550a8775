import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from carbon_pulse.cli import main

from conftest import FIXTURES, GOLDEN, REPO_ROOT

OUTPUT_FILES = [
    "clean_report.csv",
    "daily_emissions.csv",
    "fig1_running_mean.csv",
    "holidays.csv",
    "nox_report.json",
    "run_manifest.json",
    "summary_s2.csv",
    "summary_s3.csv",
    "summary_s4.csv",
    "summary_s6.csv",
    "uncertainty.json",
]


def write_config(path: Path, out_dir: Path, fixture_dir: Path = FIXTURES, **overrides) -> Path:
    text = (REPO_ROOT / "run_config.toml").read_text(encoding="utf-8")
    text = text.replace('fixture_dir = "fixtures"', f'fixture_dir = "{fixture_dir.as_posix()}"')
    text = text.replace('output_dir = "out"', f'output_dir = "{out_dir.as_posix()}"')
    for key, value in overrides.items():
        text = text.replace(f"{key} = ", f"{key}_unused = ", 1)
        text = f"{key} = {value}\n" + text
    path.mkdir(parents=True, exist_ok=True)
    config = path / "config.toml"
    config.write_text(text, encoding="utf-8")
    return config


def run_cli(*argv) -> int:
    return main(list(argv))


class TestRunCommand:
    def test_golden_outputs_byte_identical(self, tmp_path):
        out = tmp_path / "run"
        code = run_cli("run", "--config", str(write_config(tmp_path, out)))
        assert code == 0
        for name in OUTPUT_FILES:
            assert (out / name).read_bytes() == (GOLDEN / name).read_bytes(), f"{name} differs from golden"

    def test_two_invocations_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run_cli("run", "--config", str(write_config(tmp_path / "c1", out1))) == 0
        assert run_cli("run", "--config", str(write_config(tmp_path / "c2", out2))) == 0
        for name in OUTPUT_FILES:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_thread_count_does_not_change_bytes(self, tmp_path):
        out = tmp_path / "threaded"
        config = write_config(tmp_path, out, threads=4)
        assert run_cli("run", "--config", str(config)) == 0
        for name in OUTPUT_FILES:
            assert (out / name).read_bytes() == (GOLDEN / name).read_bytes(), f"{name} differs under threads=4"

    def test_empty_window_is_usage_error(self, tmp_path, capsys):
        config = write_config(tmp_path, tmp_path / "run", window_start="2020-05-01")
        assert run_cli("run", "--config", str(config)) == 2
        assert "window" in capsys.readouterr().err

    def test_missing_fixture_named_nonzero_exit(self, tmp_path, capsys):
        partial = tmp_path / "fixtures"
        shutil.copytree(FIXTURES, partial)
        (partial / "flights.csv").unlink()
        config = write_config(tmp_path, tmp_path / "run", fixture_dir=partial)
        assert run_cli("run", "--config", str(config)) == 1
        assert "flights.csv" in capsys.readouterr().err

    def test_all_sectors_off_header_only(self, tmp_path):
        out = tmp_path / "run"
        text = (REPO_ROOT / "run_config.toml").read_text(encoding="utf-8")
        text = text.replace('fixture_dir = "fixtures"', f'fixture_dir = "{FIXTURES.as_posix()}"')
        text = text.replace('output_dir = "out"', f'output_dir = "{out.as_posix()}"')
        for sector in ("power", "industry", "ground_transport", "residential", "aviation", "shipping", "uncertainty"):
            text = text.replace(f"{sector} = true", f"{sector} = false")
        config = tmp_path / "config.toml"
        config.write_text(text, encoding="utf-8")
        assert run_cli("run", "--config", str(config)) == 0
        for name in ("daily_emissions.csv", "summary_s2.csv", "summary_s3.csv", "fig1_running_mean.csv"):
            lines = (out / name).read_text(encoding="utf-8").splitlines()
            assert len(lines) == 1, f"{name} should be header-only"

    def test_env_var_overrides_fixture_dir(self, tmp_path, monkeypatch, capsys):
        bogus = tmp_path / "nowhere"
        config = write_config(tmp_path, tmp_path / "run")
        monkeypatch.setenv("CARBON_PULSE_FIXTURES", str(bogus))
        assert run_cli("run", "--config", str(config)) != 0
        # the override, not the config value, decided where to look
        assert "nowhere" in capsys.readouterr().err

    def test_unknown_config_file(self, tmp_path, capsys):
        assert run_cli("run", "--config", str(tmp_path / "missing.toml")) == 2


class TestValidateCommand:
    def test_pristine_fixtures_zero_violations(self, capsys):
        assert run_cli("validate", str(FIXTURES)) == 0
        assert "0 violations" in capsys.readouterr().out

    def test_negative_population_cell_named(self, tmp_path, capsys):
        broken = tmp_path / "fixtures"
        shutil.copytree(FIXTURES, broken)
        text = (broken / "population.csv").read_text(encoding="utf-8").splitlines()
        parts = text[1].split(",")
        parts[3] = "-5"
        text[1] = ",".join(parts)
        (broken / "population.csv").write_text("\n".join(text) + "\n", encoding="utf-8")
        assert run_cli("validate", str(broken)) == 1
        out = capsys.readouterr().out
        assert "population.csv:2" in out and "negative population" in out

    def test_weights_not_summing_to_one(self, tmp_path, capsys):
        broken = tmp_path / "fixtures"
        shutil.copytree(FIXTURES, broken)
        lines = (broken / "production.csv").read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(lines):
            if ",Chemicals," in line:
                parts = line.split(",")
                parts[5] = f"{float(parts[5]) + 0.05:.4f}"
                lines[i] = ",".join(parts)
                break
        (broken / "production.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert run_cli("validate", str(broken)) == 1
        assert "expected 1" in capsys.readouterr().out

    def test_missing_directory(self, tmp_path, capsys):
        assert run_cli("validate", str(tmp_path / "absent")) == 1


class TestReportCommand:
    @pytest.mark.parametrize("style", ["s2", "s3", "s4", "s6", "fig1"])
    def test_styles_render_from_golden_outputs(self, style, capsys):
        assert run_cli("report", "--style", style, str(GOLDEN)) == 0
        out = capsys.readouterr().out
        assert out.startswith("region") or out.startswith("date")
        assert len(out.splitlines()) > 1

    def test_s2_contains_global_row(self, capsys):
        run_cli("report", "--style", "s2", str(GOLDEN))
        assert "Global" in capsys.readouterr().out

    def test_unknown_style_usage_error(self):
        assert run_cli("report", "--style", "s9", str(GOLDEN)) == 2

    def test_missing_results_dir(self, tmp_path, capsys):
        assert run_cli("report", "--style", "s2", str(tmp_path)) == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "carbon_pulse.cli", "--version"],
        capture_output=True,
        text=True,
        cwd=REPO_ROOT,
    )
    assert proc.returncode == 0
    assert "carbon-pulse" in proc.stdout
