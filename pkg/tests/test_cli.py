import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from slotmc.cli import main, parse_range

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_matrix_text(capsys):
    code, out, _ = run(capsys, "matrix", "--slots", "2", "--stations", "2")
    assert code == 0
    assert "0: 1/2 (0.5), 0 (0), 1/2 (0.5)" in out
    assert "2: 0 (0), 0 (0), 1 (1)" in out


def test_matrix_csv_golden(capsys):
    code, out, _ = run(capsys, "matrix", "-B", "2", "-N", "2", "--format", "csv")
    assert code == 0
    assert out == (GOLDEN / "matrix_2_2.csv").read_text()


def test_matrix_infeasible(capsys):
    code, _, err = run(capsys, "matrix", "--slots", "2", "--stations", "3")
    assert code == 2
    assert "infeasible: N > B" in err


def test_matrix_with_error_json(capsys):
    code, out, _ = run(capsys, "matrix", "-B", "2", "-N", "2", "--epsilon", "1/10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["exact"] is True and data["epsilon"] == "1/10"
    assert [c["exact"] for c in data["entries"][2]] == ["1/100", "9/50", "81/100"]
    assert [c["decimal"] for c in data["entries"][2]] == [0.01, 0.18, 0.81]


def test_matrix_decimal_epsilon_is_inexact(capsys):
    code, out, _ = run(capsys, "matrix", "-B", "3", "-N", "2", "--epsilon", "0.1", "--format", "json")
    data = json.loads(out)
    assert data["exact"] is False and data["entries"][0][0]["exact"] is None


@pytest.mark.parametrize("b, n, expected", [("2", "2", "2 (2)"), ("8", "1", "1 (1)")])
def test_expect(capsys, b, n, expected):
    code, out, _ = run(capsys, "expect", "--slots", b, "--stations", n)
    assert code == 0 and out.strip() == expected


def test_expect_json_and_start_state(capsys):
    code, out, _ = run(capsys, "expect", "-B", "4", "-N", "3", "--start-state", "3", "--format", "json")
    assert json.loads(out)["expected_steps"] == {"exact": "0", "decimal": 0.0}
    code, _, _ = run(capsys, "expect", "-B", "4", "-N", "3", "--start-state", "9")
    assert code == 2


def test_stationary(capsys):
    code, out, _ = run(capsys, "stationary", "-B", "2", "-N", "1", "--epsilon", "1/2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert [p["exact"] for p in data["stationary"]] == ["1/2", "1/2"]
    assert data["expected_successes_per_round"]["exact"] == "1/2"


def test_stationary_absorbing(capsys):
    assert run(capsys, "stationary", "-B", "3", "-N", "2")[0] == 2
    code, out, _ = run(capsys, "stationary", "-B", "3", "-N", "2", "--allow-absorbing", "--format", "csv")
    assert code == 0 and out.splitlines()[-1] == "2,1,1"


def test_simulate_deterministic(capsys):
    args = ("simulate", "-B", "2", "-N", "2", "--runs", "2000", "--seed", "5", "--format", "json")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    data = json.loads(first)
    assert abs(data["mean"] - 2) <= 3 * data["stderr"]


def test_simulate_error_all_fail(capsys):
    code, out, _ = run(capsys, "simulate", "-B", "4", "-N", "3", "--epsilon", "1", "--rounds", "100",
                       "--trace", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "error" and set(data["trace"]) == {0}


def test_sweep_golden(capsys, tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["sweep", "-B", "4", "-N", "2-5", "--runs", "200", "--seed", "1", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "sweep_convergence.csv").read_bytes()
    out_json = tmp_path / "fig2.json"
    assert main(["sweep", "-B", "4", "-N", "2-5", "--runs", "200", "--seed", "1", "--format", "json",
                 "--out", str(out_json)]) == 0
    assert out_json.read_bytes() == (GOLDEN / "sweep_convergence.json").read_bytes()
    out3 = tmp_path / "fig3.csv"
    assert main(["sweep", "-B", "8", "-N", "2,4,9", "--epsilon", "1/10", "--rounds", "500", "--seed", "1",
                 "--out", str(out3)]) == 0
    assert out3.read_bytes() == (GOLDEN / "sweep_error.csv").read_bytes()


def test_sweep_headers():
    rows = list(csv.reader(io.StringIO((GOLDEN / "sweep_convergence.csv").read_text())))
    assert rows[0] == ["B", "N", "expected_steps_analytic", "mean_steps_sim", "stderr_sim", "runs", "seed"]
    rows = list(csv.reader(io.StringIO((GOLDEN / "sweep_error.csv").read_text())))
    assert rows[0] == ["B", "N", "epsilon", "avg_success_analytic", "avg_success_sim", "stderr_sim", "rounds", "seed"]
    # N > B: no analytic value
    assert rows[-1][1] == "9" and rows[-1][3] == ""


def test_sweep_seed_reproduces_with_simulate(capsys):
    row = list(csv.DictReader(io.StringIO((GOLDEN / "sweep_convergence.csv").read_text())))[1]
    code, out, _ = run(capsys, "simulate", "-B", row["B"], "-N", row["N"], "--runs", row["runs"],
                       "--seed", row["seed"], "--format", "json")
    assert format(json.loads(out)["mean"], ".12g") == row["mean_steps_sim"]


def test_sweep_jobs_same_output(capsys):
    args = ["sweep", "-B", "4", "6", "-N", "2-4", "--runs", "100"]
    assert run(capsys, *args)[1] == run(capsys, *args, "--jobs", "3")[1]


def test_sweep_empty_range(capsys):
    code, _, err = run(capsys, "sweep", "-B", "8", "-N", "5-2")
    assert code == 2 and "empty" in err


def test_sweep_analytic_only(capsys):
    code, out, _ = run(capsys, "sweep", "-B", "8", "-N", "8", "--mode", "analytic")
    assert code == 0 and out.splitlines()[1].startswith("8,8,107.070530055,,,")


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and "all checks passed" in out


def test_verify_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--max-slots", "4", "--inject-fault")
    assert code == 1 and "FAIL oracle-equivalence" in out


def test_verify_budget(capsys):
    code, _, err = run(capsys, "verify", "--max-slots", "9")
    assert code == 2 and "budget" in err


def test_bad_epsilon_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["matrix", "-B", "3", "-N", "2", "--epsilon", "5/4"])
    assert exc.value.code == 2


def test_parse_range():
    assert parse_range("2-5") == [2, 3, 4, 5]
    assert parse_range("2..4") == [2, 3, 4]
    assert parse_range("2,4,8") == [2, 4, 8]
    assert parse_range("5-2") == []


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "slotmc", "expect", "-B", "2", "-N", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "2 (2)"
