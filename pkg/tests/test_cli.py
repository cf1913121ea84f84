import json
import subprocess
import sys

from hubloc.cli import main
from hubloc.io import packaged_path
from hubloc.search import solve_deterministic


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "testcase1.json")
    assert code == 0 and out.startswith("ok: testcase1 n=5")


def test_validate_bad_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 1 and "bad.json:1:2" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "solve", "nope.json")
    assert code == 1 and "no such instance" in err


def test_scenario_out_of_range(capsys):
    code, _, err = run(capsys, "solve", "--mode", "scenario", "--scenario", "99", "testcase1.json")
    assert code == 1 and "setup scenario index out of range" in err


def test_solve_prints_hubs_and_writes(capsys, tmp_path):
    out_path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "--mode", "scenario", "--scenario", "4", "testcase1.json", "--out",
                       str(out_path), "--no-timestamp", "--threads", "1")
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("hubs: ") and " objective: " in first
    doc = json.loads(out_path.read_text())
    assert doc["setup_scenario"] == 4 and "timestamp" not in doc


def test_outputs_are_byte_identical(capsys, tmp_path):
    paths = []
    for threads in ("1", "3"):
        p = tmp_path / f"r{threads}.json"
        run(capsys, "solve", "--mode", "minimax", "testcase1", "--out", str(p), "--no-timestamp", "--threads", threads)
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_six_significant_digits_and_full_precision(capsys, testcase1):
    sol = solve_deterministic(testcase1.with_coefficients(alpha=0.3))
    value = sol.objective / testcase1.report_unit
    _, out, _ = run(capsys, "solve", "testcase1", "--alpha", "0.3")
    assert out.splitlines()[0] == f"hubs: {sol.hub_set} objective: {value:.6g}"
    _, out, _ = run(capsys, "solve", "testcase1", "--alpha", "0.3", "--full-precision")
    assert out.splitlines()[0] == f"hubs: {sol.hub_set} objective: {value!r}"


def test_infeasible_exit_code(capsys, tmp_path):
    doc = json.loads(packaged_path("testcase1.json").read_text())
    doc["capacities"] = [1000] * 5
    p = tmp_path / "tight.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "solve", str(p))
    assert code == 2 and "infeasible" in out
    code, _, err = run(capsys, "solve", "--mode", "minimax", str(p))
    assert code == 2 and "demand scenario" in err


def test_table3_projection(capsys):
    code, out, _ = run(capsys, "table3", "testcase1", "--alphas", "0.5")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split("\t") == ["model", "hubs@0.5", "cost@0.5"]
    assert [l.split("\t")[0] for l in lines[1:]] == ["BDM", "s_f1", "s_f2", "s_f3", "s_f4", "MRM"]
    assert lines[-1].split("\t")[2] == "-"


def test_table3_single_scenario(capsys, tmp_path):
    doc = json.loads(packaged_path("testcase1.json").read_text())
    doc["setup_scenarios"] = doc["setup_scenarios"][:1]
    p = tmp_path / "one.json"
    p.write_text(json.dumps(doc))
    _, out, _ = run(capsys, "table3", str(p), "--alphas", "0.5")
    assert [l.split("\t")[0] for l in out.splitlines()[1:]] == ["BDM", "s_f1", "MRM"]


def test_breakeven_single_point(capsys, tmp_path):
    out_path = tmp_path / "be.tsv"
    code, out, _ = run(capsys, "breakeven", "testcase1", "--phi-max", "0", "--out", str(out_path))
    assert code == 0
    assert len(out_path.read_text().splitlines()) == 2
    assert "phi*" in out or "no crossing" in out


def test_schema(capsys):
    code, out, _ = run(capsys, "schema", "solution")
    assert code == 0 and json.loads(out)["title"] == "hub location solution"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "hubloc", "validate", "casestudy_west"], capture_output=True, text=True)
    assert res.returncode == 0 and "n=14" in res.stdout
