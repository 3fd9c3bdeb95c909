"""End-to-end CLI behaviour: generation, suites, exit codes, determinism."""

import json
from pathlib import Path

import pytest

from cantordyn.cli import main, write_measure
from cantordyn.measures import atomic_measure, dirac
from fractions import Fraction

BALLOON_CONFIG = """
[map]
kind = balloon
levels = 3:2, 5:2
counts = 2, 4

[analysis]
eps = 1/4
delta = 1/2
lambda = 1/4, 1/8
periods = 1, 2
grid_resolution = 2
entropy_resolution = 1
entropy_horizon = 4
entropy_eps = 1/2
chain_deltas = 3/4
chain_pairs = 1
chain_lengths_extra = 1
continuity_depth = 3
level = 0

[run]
seed = 5
map_file = map.json
"""

DUMBBELL_CONFIG = """
[map]
kind = dumbbell
level = 4:2
count = 2
bar_length = 1

[analysis]
eps = 1/3
delta = 1/2
lambda = 1/4
periods = 1, 2
grid_resolution = 1
entropy_resolution = 1
entropy_horizon = 4
entropy_eps = 1/2
chain_deltas = 3/4
chain_pairs = 1
chain_lengths_extra = 1
continuity_depth = 4
level = 0

[run]
seed = 5
map_file = map.json
"""


def _write_config(tmp_path, text):
    path = tmp_path / "config.ini"
    path.write_text(text)
    return str(path)


def test_generate_and_analyze_balloon(tmp_path, capsys):
    cfg = _write_config(tmp_path, BALLOON_CONFIG)
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "map.json").exists()
    assert main(["analyze", "--config", cfg, "--suite", "recurrence",
                 "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report_recurrence.json").read_text())
    assert report["summary"]["passed"] == report["summary"]["total"]
    assert (tmp_path / "summary_recurrence.csv").exists()
    out = capsys.readouterr().out
    assert "[PASS]" in out


def test_full_suite_dumbbell(tmp_path):
    cfg = _write_config(tmp_path, DUMBBELL_CONFIG)
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert main(["analyze", "--config", cfg, "--suite", "all",
                 "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report_all.json").read_text())
    operations = {c["operation"] for c in report["certificates"]}
    assert {"li_yorke_scan", "entropy_growth", "chain_connection",
            "transitivity_check", "weak_shadowing_refutation",
            "loop_support_check"} <= operations
    # no floats anywhere in the payloads
    def assert_no_floats(obj):
        if isinstance(obj, float):
            raise AssertionError("float in payload")
        if isinstance(obj, dict):
            for v in obj.values():
                assert_no_floats(v)
        if isinstance(obj, list):
            for v in obj:
                assert_no_floats(v)
    assert_no_floats(report["certificates"])


def test_reports_are_deterministic(tmp_path):
    cfg = _write_config(tmp_path, BALLOON_CONFIG)
    main(["generate", "--config", cfg, "--out", str(tmp_path)])
    main(["analyze", "--config", cfg, "--suite", "chains", "--out", str(tmp_path)])
    first = json.loads((tmp_path / "report_chains.json").read_text())
    main(["analyze", "--config", cfg, "--suite", "chains", "--out", str(tmp_path)])
    second = json.loads((tmp_path / "report_chains.json").read_text())
    first.pop("timings")
    second.pop("timings")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_generate_infeasible_config_exits_3(tmp_path, capsys):
    cfg = _write_config(
        tmp_path, BALLOON_CONFIG.replace("levels = 3:2, 5:2", "levels = 2:3")
    )
    cfg_text = Path(cfg).read_text().replace("counts = 2, 4", "counts = 1")
    Path(cfg).write_text(cfg_text)
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == 3
    assert "error" in capsys.readouterr().err


def test_analyze_without_map_exits_3(tmp_path):
    cfg = _write_config(tmp_path, BALLOON_CONFIG)
    assert main(["analyze", "--config", cfg, "--suite", "chains",
                 "--out", str(tmp_path)]) == 3


def test_missing_config_exits_3(tmp_path):
    assert main(["generate", "--config", str(tmp_path / "nope.ini"),
                 "--out", str(tmp_path)]) == 3


def test_prohorov_command(tmp_path, capsys):
    mu = atomic_measure({"": Fraction(1, 2), "1": Fraction(1, 2)})
    write_measure(tmp_path / "mu.measure", mu)
    write_measure(tmp_path / "nu.measure", dirac(""))
    code = main(["prohorov", str(tmp_path / "mu.measure"),
                 str(tmp_path / "nu.measure"), "--two-sided"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "1/2"
    assert "two-sided: 1/2" in out


def test_prohorov_identical_files(tmp_path, capsys):
    write_measure(tmp_path / "mu.measure", dirac("01"))
    code = main(["prohorov", str(tmp_path / "mu.measure"),
                 str(tmp_path / "mu.measure")])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "0"


def test_prohorov_parse_error(tmp_path, capsys):
    (tmp_path / "bad.measure").write_text("01 not-a-number\n")
    write_measure(tmp_path / "mu.measure", dirac("01"))
    code = main(["prohorov", str(tmp_path / "bad.measure"),
                 str(tmp_path / "mu.measure")])
    assert code == 3
    assert "line 1" in capsys.readouterr().err


def test_report_command(tmp_path, capsys):
    cfg = _write_config(tmp_path, BALLOON_CONFIG)
    main(["generate", "--config", cfg, "--out", str(tmp_path)])
    main(["analyze", "--config", cfg, "--suite", "liyorke", "--out", str(tmp_path)])
    capsys.readouterr()
    assert main(["report", str(tmp_path / "report_liyorke.json")]) == 0
    assert "certificates passed" in capsys.readouterr().out


def test_report_flags_failures(tmp_path, capsys):
    bad = {
        "certificates": [
            {"operation": "x", "verdict": "bad", "passed": False}
        ],
        "summary": {"total": 1, "passed": 0},
    }
    path = tmp_path / "report.json"
    path.write_text(json.dumps(bad))
    assert main(["report", str(path)]) == 2
    assert "[FAIL]" in capsys.readouterr().out


def test_prohorov_distance_one(tmp_path, capsys):
    write_measure(tmp_path / "a.measure", dirac(""))
    write_measure(tmp_path / "b.measure", dirac("1"))
    assert main(["prohorov", str(tmp_path / "a.measure"),
                 str(tmp_path / "b.measure")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "1"
