import json
import math
import subprocess
import sys

import pytest

from bb84eve.security import threshold


def run_cli(*args: str, expect: int = 0) -> subprocess.CompletedProcess:
    result = subprocess.run(
        [sys.executable, "-m", "bb84eve", *args],
        capture_output=True,
        text=False,
    )
    assert result.returncode == expect, result.stderr.decode()
    return result


class TestThresholdsCommand:
    def test_json_matches_library(self):
        result = run_cli("thresholds", "--mu", "1", "--eta", "0.9", "--format", "json")
        doc = json.loads(result.stdout)
        assert doc["schema_version"] == "1"
        for kind in ("ir", "opt", "bs_ir", "bs_opt", "pns"):
            assert doc["thresholds"][kind] == pytest.approx(
                threshold(kind, 1.0, 0.9).max_d_ab, abs=1e-15
            )
        assert doc["break_possible"] is False
        assert doc["eta_star"] == pytest.approx(1 - math.log(2), abs=1e-12)

    def test_break_region(self):
        result = run_cli("thresholds", "--mu", "1", "--eta", "0.3", "--format", "json")
        doc = json.loads(result.stdout)
        assert doc["thresholds"]["pns"] == 0.0
        assert doc["break_possible"] is True

    def test_table_lists_all_strategies(self):
        text = run_cli("thresholds", "--mu", "1", "--eta", "0.9").stdout.decode()
        for token in ("ir", "opt", "bs_ir", "bs_opt", "pns", "eta_star"):
            assert token in text

    def test_csv_shape(self):
        raw = run_cli(
            "thresholds", "--mu", "1", "--eta", "0.9", "--format", "csv"
        ).stdout
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert lines[0] == "quantity,max_d_ab,break_possible"
        assert len(lines) == 7  # header + five strategies + eta_star

    def test_validation_exit_code(self):
        run_cli("thresholds", "--mu", "0.0", expect=2)
        run_cli("thresholds", expect=2)

    def test_manifest_on_stderr(self):
        result = run_cli("thresholds", "--mu", "1", "--eta", "0.9")
        manifest = json.loads(result.stderr.decode().strip().splitlines()[-1])
        assert manifest["command"] == "thresholds"
        assert manifest["params"] == {"mu": 1.0, "eta": 0.9}
        assert "timestamp_utc" in manifest and "version" in manifest


class TestSweepCommand:
    def test_header_and_first_row(self):
        raw = run_cli(
            "sweep", "--strategy", "opt", "--d-min", "0", "--d-max", "0.3",
            "--steps", "4",
        ).stdout
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert lines[0] == "d_ab,i_ab_bits,i_ae_bits,feasible"
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == 1.0
        assert float(first[2]) == 0.0
        assert first[3] == "true"

    def test_ir_crossing_bracketed(self):
        raw = run_cli(
            "sweep", "--strategy", "ir", "--d-min", "0", "--d-max", "0.25",
            "--steps", "101",
        ).stdout.decode()
        rows = [line.split(",") for line in raw.splitlines()[1:]]
        gaps = [(float(d), float(ab) - float(ae)) for d, ab, ae, _ in rows]
        sign_changes = [
            (a[0], b[0]) for a, b in zip(gaps, gaps[1:]) if a[1] > 0 >= b[1]
        ]
        assert len(sign_changes) == 1
        lo, hi = sign_changes[0]
        assert lo < 0.20710678118654754 <= hi

    def test_feasible_column_flips_with_the_gap(self):
        raw = run_cli(
            "sweep", "--strategy", "bs-opt", "--mu", "1", "--eta", "0.9",
            "--d-min", "0", "--d-max", "0.3", "--steps", "61",
        ).stdout.decode()
        thr = threshold("bs_opt", 1.0, 0.9).max_d_ab
        for line in raw.splitlines()[1:]:
            d, _, _, ok = line.split(",")
            assert (ok == "true") == (float(d) < thr)

    def test_json_format(self):
        doc = json.loads(
            run_cli(
                "sweep", "--strategy", "pns", "--mu", "1", "--eta", "0.9",
                "--steps", "5", "--d-min", "0", "--d-max", "0.1",
                "--format", "json",
            ).stdout
        )
        assert len(doc["rows"]) == 5
        assert set(doc["rows"][0]) == {"d_ab", "i_ab_bits", "i_ae_bits", "feasible"}

    def test_validation(self):
        run_cli("sweep", "--strategy", "ir", "--d-min", "0.3", "--d-max", "0.2", expect=2)
        run_cli("sweep", expect=2)


class TestSimulateCommand:
    def test_quiet_line_has_no_errors(self):
        doc = json.loads(
            run_cli(
                "simulate", "--attack", "none", "--mu", "0.1", "--eta", "1",
                "--pulses", "100000", "--seed", "42", "--format", "json",
            ).stdout
        )
        assert doc["stats"]["qber"] == 0.0
        assert doc["stats"]["eve_accuracy"] == 0.5

    def test_repeat_runs_are_byte_identical(self):
        args = (
            "simulate", "--attack", "bs-opt", "--t", "0.9", "--d", "0.1",
            "--mu", "1", "--pulses", "50000", "--seed", "7", "--shards", "4",
            "--format", "json",
        )
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_check_reports_small_sigma_distances(self):
        doc = json.loads(
            run_cli(
                "simulate", "--attack", "bs-opt", "--t", "0.9", "--d", "0.1",
                "--mu", "1", "--pulses", "1000000", "--seed", "7", "--check",
                "--format", "json",
            ).stdout
        )
        assert doc["check"], "expected at least one checked metric"
        for entry in doc["check"]:
            assert entry["sigma_distance"] < 3.0, entry

    def test_pns_kappa_derived_from_channel(self):
        doc = json.loads(
            run_cli(
                "simulate", "--attack", "pns", "--mu", "1", "--eta", "0.9",
                "--pulses", "1000", "--seed", "1", "--format", "json",
            ).stdout
        )
        assert doc["params"]["kappa"] == pytest.approx(math.expm1(0.1), abs=1e-12)

    def test_manifest_params_be_reusable_as_config(self, tmp_path):
        args = (
            "simulate", "--attack", "pns", "--mu", "1", "--eta", "0.9",
            "--d", "0.05", "--pulses", "20000", "--seed", "3", "--format", "json",
        )
        manifest_path = tmp_path / "manifest.json"
        first = run_cli(*args, "--manifest", str(manifest_path))
        assert manifest_path.exists()
        second = run_cli(
            "simulate", "--config", str(manifest_path), "--format", "json"
        )
        assert first.stdout == second.stdout

    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"attack": "none", "mu": 0.1, "pulses": 1000, "seed": 5}))
        doc = json.loads(
            run_cli(
                "simulate", "--config", str(cfg), "--pulses", "2000",
                "--format", "json",
            ).stdout
        )
        assert doc["params"]["pulses"] == 2000
        assert doc["params"]["mu"] == 0.1

    def test_output_file(self, tmp_path):
        out = tmp_path / "stats.json"
        run_cli(
            "simulate", "--attack", "none", "--mu", "0.2", "--pulses", "1000",
            "--seed", "2", "--format", "json", "--output", str(out),
        )
        assert json.loads(out.read_text())["stats"]["n_pulses"] == 1000

    def test_validation(self):
        run_cli("simulate", "--attack", "bs-ir", "--mu", "1", expect=2)  # missing --t
        run_cli("simulate", "--attack", "opt", "--mu", "1", "--d", "0.7", expect=2)
        run_cli("simulate", "--attack", "none", expect=2)  # missing --mu
        run_cli("simulate", "--attack", "none", "--mu", "1", "--shards", "0", expect=2)


class TestVerifyCommand:
    def test_passes_and_prints_deviations(self):
        result = run_cli("verify")
        text = result.stdout.decode()
        assert "verify: PASS" in text
        assert text.count("PASS") >= 6

    def test_json_format(self):
        doc = json.loads(run_cli("verify", "--format", "json").stdout)
        assert doc["pass"] is True
        assert len(doc["checks"]) >= 6
        assert all(c["max_deviation"] < 1e-12 for c in doc["checks"])


class TestSweepCrossings:
    def test_pns_crossing_located_to_1e3_at_1e4_steps(self):
        raw = run_cli(
            "sweep", "--strategy", "pns", "--mu", "1", "--eta", "0.9",
            "--d-min", "0", "--d-max", "0.25", "--steps", "10000",
        ).stdout.decode()
        rows = [line.split(",") for line in raw.splitlines()[1:]]
        gaps = [(float(d), float(ab) - float(ae)) for d, ab, ae, _ in rows]
        crossing = next(
            0.5 * (a[0] + b[0]) for a, b in zip(gaps, gaps[1:]) if a[1] > 0 >= b[1]
        )
        assert abs(crossing - threshold("pns", 1.0, 0.9).max_d_ab) < 1e-3
