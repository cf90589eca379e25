import csv
import io
import json
import os
import subprocess
import sys

import pytest

from almostprime.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_default_certified(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "CERTIFIED" in out and "NOT" not in out


def test_verify_negative_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "--theta", "1.80")
    assert code == 1 and "NOT CERTIFIED" in out


def test_verify_infeasible_exit_two(capsys):
    code, _, err = run(capsys, "verify", "--delta", "0.80")
    assert code == 2 and "M < y" in err
    code, _, err = run(capsys, "verify", "--theta", "2.5")
    assert code == 2


def test_verify_json_round_trip(capsys, tmp_path):
    path = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--format", "json", "--output", str(path))
    assert code == 0 and "bracket" in out
    payload = json.loads(path.read_text())
    assert payload["schema_version"] == "1"
    assert payload["bracket"]["total"] == 0.00042825830584359084


def test_usage_errors_exit_64():
    for argv in (["bogus"], ["verify", "--theta", "abc"], ["tabulate", "--step", "-1"], ["verify", "--abs-tol", "0"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 64


def test_tabulate_rows(capsys):
    code, out, _ = run(capsys, "tabulate", "--step", "0.1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 51
    assert rows[0]["u"] == "1.0" and rows[-1]["u"] == "6.0"
    assert rows[-1]["F"] == "" and float(rows[0]["f"]) == 0.0
    assert rows[1]["F"] != ""


def test_tabulate_deterministic(capsys):
    _, a, _ = run(capsys, "tabulate", "--step", "0.25")
    _, b, _ = run(capsys, "tabulate", "--step", "0.25")
    assert a == b


def test_survey_csv(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "survey", "--q-lo", "2", "--q-hi", "60", "--output", str(path))
    assert code == 0 and "flagged rows" in out
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0])[:4] == ["q", "worst_a", "p2", "ratio"]
    assert len(rows) == 59


def test_selberg_json(capsys):
    code, out, _ = run(capsys, "selberg", "--z", "30", "--d1", "900")
    payload = json.loads(out)
    assert code == 0 and payload["schema_version"] == "1" and len(payload["weights"]) == 104


def test_selberg_level_error(capsys):
    code, _, err = run(capsys, "selberg", "--z", "30", "--d1", "10")
    assert code == 1 and json.loads(err)["error"] == "LevelBelowZ"


def test_optimize_trace(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "optimize", "--lo", "1.80", "--hi", "1.86", "--tol", "1e-3", "--output", str(path))
    assert code == 0 and "theta*" in out
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["theta", "delta", "main", "corr1", "corr2", "corr3", "total", "err"]


def test_weighted_sum(capsys):
    code, out, _ = run(capsys, "weighted-sum", "--x", "10000", "--q", "101", "--a", "3")
    assert code == 0 and "coefficient vectors agree: True" in out
    code, out, _ = run(capsys, "weighted-sum", "--x", "10000", "--q", "101", "--a", "3", "--format", "csv")
    assert out.splitlines()[0] == "p,c_p,S_Ap"


def test_module_entry_and_pure_python_backend():
    env = dict(os.environ, ALMOSTPRIME_PURE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", "import almostprime; print(almostprime.BACKEND)"], capture_output=True, text=True, env=env
    )
    assert proc.stdout.strip() == "python"
    proc = subprocess.run(
        [sys.executable, "-m", "almostprime", "survey", "--q-hi", "40", "--format", "text"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0 and "flagged rows" in proc.stdout
