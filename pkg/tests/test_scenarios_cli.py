"""Scenario registry, suite orchestration, report format, and the CLI."""

import io
import json

import numpy as np
import pytest

from affconn.cli import main
from affconn.errors import CheckNotRefinable, ConfigInvalid, UnsupportedKind
from affconn.scenarios import get_scenario, scenario_names, weighted_scenarios
from affconn.suite import (check_names, convergence_rows, emit_convergence,
                           normalize_config, report_json, run_suite)

SMALL_CONFIG = {"scenarios": ["euclidean-flat", "disk-flat"],
                "checks": ["torsion", "statistical", "curvature-bound"]}


class TestRegistry:
    def test_required_scenarios_present(self):
        names = scenario_names()
        for required in ("euclidean-flat", "s2-classical", "s3-classical",
                         "s2-weighted-quadratic", "s2-substatic",
                         "s2-wylie-yeroshkin"):
            assert required in names
        assert len(names) >= 6

    def test_four_weighted_scenarios(self):
        assert len(weighted_scenarios()) >= 4

    def test_unknown_scenario(self):
        with pytest.raises(UnsupportedKind):
            get_scenario("s17-exotic")

    def test_parameter_specializations(self):
        assert get_scenario("s2-substatic").params.alpha == 0.0
        assert get_scenario("s2-substatic").params.beta == 1.0
        wy = get_scenario("s2-wylie-yeroshkin")
        assert wy.params.alpha == pytest.approx(1.0)  # 1/(n-1) at n = 2
        assert wy.params.beta == 0.0


class TestConfig:
    def test_defaults_cover_everything(self):
        cfg = normalize_config({})
        assert cfg["scenarios"] == sorted(scenario_names())
        assert cfg["checks"] == check_names()

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigInvalid):
            normalize_config({"scenarios": [], "typo": 1})

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ConfigInvalid):
            normalize_config({"scenarios": ["nope"]})

    def test_unknown_check_rejected(self):
        with pytest.raises(ConfigInvalid):
            normalize_config({"checks": ["nope"]})

    def test_bad_workers_rejected(self):
        with pytest.raises(ConfigInvalid):
            normalize_config({"workers": 0})

    def test_round_trip_is_identity(self):
        cfg = normalize_config(SMALL_CONFIG)
        again = normalize_config(
            {k: cfg[k] for k in ("scenarios", "checks", "workers")})
        assert again == cfg


class TestSuite:
    def test_small_run_passes(self):
        report = run_suite(SMALL_CONFIG)
        assert report["passed"]
        keys = [(r["scenario"], r["check"]) for r in report["records"]]
        assert keys == sorted(keys, key=lambda k: (k[0], check_names().index(k[1])))

    def test_byte_identical_across_workers(self):
        one = report_json(run_suite(SMALL_CONFIG))
        four = report_json(run_suite({**SMALL_CONFIG, "workers": 4}))
        assert one == four

    def test_records_carry_values_and_threshold(self):
        report = run_suite(SMALL_CONFIG)
        for record in report["records"]:
            assert "statement" in record
            assert "values" in record and "threshold" in record

    def test_report_is_valid_json(self):
        text = report_json(run_suite(SMALL_CONFIG))
        parsed = json.loads(text)
        assert parsed["stamp"]["precision"] == "float64"
        assert "workers" not in parsed["config"]


class TestConvergence:
    def test_eigenvalue_ladder(self):
        rows = convergence_rows("s2-classical", "eigenvalue", [3, 4, 5])
        errors = [r[3] for r in rows]
        assert errors == sorted(errors, reverse=True)
        assert rows[-1][4] == pytest.approx(2.0, abs=0.1)

    def test_reilly_ladder(self):
        rows = convergence_rows("s2-hemisphere-weighted", "reilly", [3, 4, 5])
        assert rows[-1][4] >= 2.0

    def test_unrefinable_check(self):
        with pytest.raises(CheckNotRefinable):
            convergence_rows("s2-classical", "torsion", [1, 2])

    def test_csv_is_rfc4180(self):
        buf = io.StringIO()
        emit_convergence("s2-classical", "eigenvalue", [3, 4], buf)
        text = buf.getvalue()
        lines = text.split("\r\n")
        assert lines[0] == "level,h,value,error,observed_order"
        assert len(lines) == 4 and lines[-1] == ""


class TestCli:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "s2-classical" in out and "s3-classical" in out

    def test_list_filter_no_match(self, capsys):
        assert main(["list", "--filter", "zzz"]) == 0
        assert "s2" not in capsys.readouterr().out

    def test_verify_with_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(SMALL_CONFIG))
        out = tmp_path / "report.json"
        assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
        written = out.read_text()
        assert written == capsys.readouterr().out
        assert json.loads(written)["passed"]

    def test_verify_bad_config_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"mystery": true}')
        assert main(["verify", "--config", str(cfg)]) == 2

    def test_converge(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        assert main(["converge", "--scenario", "s2-classical",
                     "--check", "eigenvalue", "--levels", "3..4",
                     "--out", str(out)]) == 0
        assert out.read_text().startswith("level,h,value,error")

    def test_converge_bad_levels_exits_2(self, capsys):
        assert main(["converge", "--scenario", "s2-classical",
                     "--check", "eigenvalue", "--levels", "oops"]) == 2

    def test_converge_unrefinable_exits_2(self, capsys):
        assert main(["converge", "--scenario", "s2-classical",
                     "--check", "torsion", "--levels", "1..2"]) == 2

    def test_seedless_flag_accepted(self, capsys):
        assert main(["--seedless", "list"]) == 0
