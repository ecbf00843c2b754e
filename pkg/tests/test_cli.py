from __future__ import annotations

import csv
import subprocess
import sys

import pytest

from fiducial_landing.cli import main
from fiducial_landing.plotting import plot_errors, plot_timeline
from fiducial_landing.telemetry import read_csv

QUICK = """\
name: quick
pad_type: active_ir
start: {distance_m: 12, altitude_m: 10, pad_bearing_deg: 15}
seed: 3
"""


@pytest.fixture
def scen_dir(tmp_path):
    d = tmp_path / "scenarios"
    d.mkdir()
    (d / "quick.yaml").write_text(QUICK)
    (d / "short.yaml").write_text(QUICK.replace("name: quick", "name: short") + "max_sim_time_s: 3\n")
    return d


class TestRun:
    def test_landed_exit_zero(self, scen_dir, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(out)]) == 0
        assert "outcome=landed" in capsys.readouterr().out
        assert (out / "quick.csv").exists() and (out / "quick.png").stat().st_size > 0

    def test_timeout_exit_two(self, scen_dir):
        assert main(["run", "--scenario", str(scen_dir / "short.yaml")]) == 2

    def test_json_format(self, scen_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(out), "--format", "json"]) == 0
        assert (out / "quick.json").read_text().startswith("{")

    def test_seed_override_changes_telemetry(self, scen_dir, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(a)])
        main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(b), "--seed", "99"])
        assert (a / "quick.csv").read_text() != (b / "quick.csv").read_text()

    def test_missing_scenario_exit_one(self, tmp_path, capsys):
        assert main(["run", "--scenario", str(tmp_path / "nope.yaml")]) == 1
        assert "nope.yaml" in capsys.readouterr().err

    def test_invalid_scenario_exit_one(self, tmp_path, capsys):
        p = tmp_path / "bad.yaml"
        p.write_text("pad_type: visual\nstart: {distance_m: 20, altitude_m: -3}\n")
        assert main(["run", "--scenario", str(p)]) == 1
        assert "altitude_m" in capsys.readouterr().err

    def test_config_flag(self, scen_dir, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("controller: {nonsense: 1}\n")
        assert main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--config", str(cfg)]) == 1

    def test_scenario_relative_config(self, scen_dir):
        (scen_dir / "rig.yaml").write_text("sensing: {pixel_jitter_px: 0}\n")
        p = scen_dir / "withcfg.yaml"
        p.write_text(QUICK + "config: rig.yaml\n")
        assert main(["run", "--scenario", str(p)]) == 0


class TestBatch:
    def test_summary(self, scen_dir, tmp_path, capsys):
        summary = tmp_path / "s" / "summary.csv"
        assert main(["batch", "--dir", str(scen_dir), "--summary", str(summary), "--jobs", "2"]) == 0
        rows = list(csv.DictReader(summary.open()))
        assert [r["pad_type"] for r in rows] == ["active_ir", "all"]
        assert rows[-1]["n"] == "1" and rows[-1]["n_runs"] == "2"
        assert summary.with_name("summary_errors.png").exists()

    def test_empty_dir(self, tmp_path):
        assert main(["batch", "--dir", str(tmp_path), "--summary", str(tmp_path / "s.csv")]) == 1

    def test_missing_dir(self, tmp_path):
        assert main(["batch", "--dir", str(tmp_path / "x"), "--summary", str(tmp_path / "s.csv")]) == 1

    def test_bad_jobs(self, scen_dir, tmp_path):
        assert main(["batch", "--dir", str(scen_dir), "--summary", str(tmp_path / "s.csv"), "--jobs", "0"]) == 1


class TestPlot:
    def test_plot_from_record(self, scen_dir, tmp_path):
        out = tmp_path / "out"
        main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(out)])
        img = tmp_path / "timeline.png"
        assert main(["plot", "--record", str(out / "quick.csv"), "--out", str(img)]) == 0
        assert img.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_plot_missing_record(self, tmp_path):
        assert main(["plot", "--record", str(tmp_path / "none.csv"), "--out", str(tmp_path / "x.png")]) == 1

    def test_plot_helpers(self, scen_dir, tmp_path):
        main(["run", "--scenario", str(scen_dir / "quick.yaml"), "--out", str(tmp_path)])
        rows = read_csv(tmp_path / "quick.csv")
        assert plot_timeline(rows, tmp_path / "a.svg").read_text().lstrip().startswith("<?xml")
        assert plot_errors({"visual": [0.1, 0.2], "active_ir": [0.05]}, tmp_path / "b.png").exists()
        with pytest.raises(ValueError):
            plot_timeline([], tmp_path / "c.png")


def test_module_entry_point(scen_dir):
    proc = subprocess.run([sys.executable, "-m", "fiducial_landing", "run", "--scenario",
                           str(scen_dir / "short.yaml")], capture_output=True, text=True)
    assert proc.returncode == 2 and "outcome=timeout" in proc.stdout


def test_usage_error_is_reported():
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 2
