import json
import subprocess
import sys
from pathlib import Path

import pytest

from gperfect import cli

DATA = Path(__file__).resolve().parents[1] / "data" / "example_a"


def test_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in cli.SCENARIOS:
        assert name in out


def test_unknown_scenario(capsys):
    assert cli.main(["run", "--scenario", "nope"]) == 2
    err = capsys.readouterr().err
    assert "nope" in err and "example-a" in err and "covers-battery" in err
    with pytest.raises(cli.UnknownScenario):
        cli.run("nope")


def test_negative_seed(capsys):
    assert cli.main(["run", "--scenario", "ext-shadow", "--seed", "-1"]) == 2


def test_run_json(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["run", "--scenario", "covers-battery", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["schema"] == cli.SCHEMA
    assert report["summary"]["all_passed"]
    assert report["summary"]["total"] == len(report["records"]) == 4
    avatar = next(r for r in report["records"] if r["name"] == "S1-avatar")
    assert (avatar["details"]["L_dim"], avatar["details"]["X_dim"]) == (2, 1)
    assert all("duration" not in r for r in report["records"])


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["run", "--scenario", "random-covers", "--trials", "5", "--seed", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timings_opt_in():
    report = cli.run("ext-shadow", timings=True)
    assert "duration" in report["summary"]
    assert all("duration" in r for r in report["records"])


def test_text_format(capsys):
    assert cli.main(["run", "--scenario", "ext-shadow", "--format", "text"]) == 0
    out = capsys.readouterr().out
    report = cli.run("ext-shadow")
    lines = out.splitlines()
    assert len(lines) == len(report["records"]) + 2
    assert all(line.split()[0] in ("PASS", "FAIL", "SKIPPED") for line in lines[1:-1])
    assert "trials -" in lines[0]


def test_unwritable_path(tmp_path, capsys):
    target = tmp_path / "missing-dir" / "r.json"
    assert cli.main(["run", "--scenario", "ext-shadow", "--out", str(target)]) == 2
    assert str(target) in capsys.readouterr().err


def test_failing_scenario_exit_code(monkeypatch):
    from gperfect.suites import _record

    bad = cli.Scenario("always-fails", "", lambda s, t, d: [_record("x", False, "exhaustive", {}, 0.0)])
    monkeypatch.setitem(cli.SCENARIOS, "always-fails", bad)
    assert cli.main(["run", "--scenario", "always-fails", "--out", "-"]) == 1


def test_check_files(capsys, tmp_path):
    paths = sorted(str(p) for p in DATA.glob("*.json"))
    assert cli.main(["check-files", *paths]) == 0
    out = capsys.readouterr().out
    assert out.count("ok") == len(paths)
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 2, "dim": 1, "unit": [0], "mul": [[[1]]]}')
    assert cli.main(["check-files", str(bad)]) == 1
    assert "error" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gperfect", "run", "--scenario", "example-a", "--seed", "42", "--trials", "200"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["summary"]["all_passed"]
    assert report["scenario"] == {"name": "example-a", "seed": 42, "trials": 200, "depth": 3}
