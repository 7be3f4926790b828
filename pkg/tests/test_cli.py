import csv
import io
import json
import shutil
import subprocess
import sys
from dataclasses import replace

import pytest

from qamem import experiment as ex
from qamem.cli import main

VALID = """\
name: ex1
n: 3
patterns: ["010", "#4"]
centers: ["#3"]
a: 0.25
"""


def _write(tmp_path, text, name="spec.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_defaults():
    spec = ex.parse_spec(VALID)
    assert spec.method == "Ezhov" and spec.lambda_ == "auto" and spec.max_iters == 30
    assert ex.to_config(spec).patterns.members == (2, 4)


def test_serialize_roundtrip():
    spec = ex.parse_spec(VALID + "method: C2\na_prime: 0.1\ngrid: {a: [0.1, 0.2]}\nlambda: fixed:5\n")
    assert ex.parse_spec(ex.serialize(spec)) == spec


@pytest.mark.parametrize("extra,field,needle", [
    ("a: 0.7\n", "a", "(0, 1/2)"),
    ("a: 0\n", "a", "(0, 1/2)"),
    ("patterns: ['#2', '#2']\n", "patterns", "duplicate"),
    ("patterns: ['#9']\n", "patterns", "out of range"),
    ("patterns: ['01']\n", "patterns", "length"),
    ("patterns: [10]\n", "patterns", "quoted"),
    ("method: C2\n", "a_prime", "required"),
    ("method: grover\n", "method", "Ezhov"),
    ("lambda: often\n", "lambda", "fixed"),
    ("max_iters: 0\n", "max_iters", ">= 1"),
    ("grid: {beta: [1]}\n", "grid", "unknown axis"),
    ("colour: red\n", "colour", "unknown key"),
])
def test_validation_diagnostics(extra, field, needle):
    with pytest.raises(ex.SpecError) as err:
        ex.parse_spec(VALID + extra)
    assert err.value.field == field
    assert needle in str(err.value)


def test_missing_key_and_malformed():
    with pytest.raises(ex.SpecError, match="required key missing"):
        ex.parse_spec("name: x\nn: 3\n")
    with pytest.raises(ex.SpecError, match="malformed"):
        ex.parse_spec("name: [unclosed\n")
    with pytest.raises(ex.SpecError, match="malformed"):
        ex.parse_spec("- just\n- a list\n")


def test_run_writes_artifacts(tmp_path, capsys):
    spec = _write(tmp_path, VALID)
    assert main(["run", spec, "--out", str(tmp_path / "out")]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["lambda"] == 4 and info["analytic_lambda"] == 4
    trace = _rows((tmp_path / "out" / "ex1_trace.csv").read_text())
    assert [r["iteration"] for r in trace] == ["0", "1", "2", "3", "4"]
    state = _rows((tmp_path / "out" / "ex1_state.csv").read_text())
    assert [r["bitstring"] for r in state][:3] == ["000", "001", "010"]
    assert float(state[3]["amplitude"]) == pytest.approx(0.531, abs=5e-3)
    saved = json.loads((tmp_path / "out" / "ex1_summary.json").read_text())
    assert saved == info


def test_run_is_byte_identical(tmp_path):
    spec = _write(tmp_path, VALID + "seed: 11\nmethod: C1\n")
    for d in ("a", "b"):
        assert main(["run", spec, "--out", str(tmp_path / d)]) == 0
    for f in ("ex1_trace.csv", "ex1_state.csv", "ex1_summary.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_run_validation_exit_code(tmp_path, capsys):
    spec = _write(tmp_path, VALID + "a: 0.9\n")
    assert main(["run", spec]) == 2
    assert "a must lie in (0, 1/2)" in capsys.readouterr().err


def test_run_missing_file_exit_code(tmp_path):
    assert main(["run", str(tmp_path / "nope.yaml")]) == 1


def test_lambda_override(tmp_path, capsys):
    spec = _write(tmp_path, VALID)
    assert main(["run", spec, "--lambda", "fixed:9"]) == 0
    assert json.loads(capsys.readouterr().out)["lambda"] == 9


def test_sweep_grid_order_and_jobs(tmp_path):
    spec = ex.parse_spec(VALID + "grid: {a: [0.1, 0.3], method: [Ezhov, C1]}\n")
    serial = ex.sweep(spec, jobs=1)
    assert ex.sweep(spec, jobs=2) == serial
    rows = _rows(serial)
    assert [(r["a"], r["method"]) for r in rows] == [
        ("0.100000", "Ezhov"), ("0.100000", "C1"), ("0.300000", "Ezhov"), ("0.300000", "C1")]
    assert all(r["error"] == "" for r in rows)


def test_sweep_empty_grid_is_header_only():
    out = ex.sweep(ex.parse_spec(VALID + "grid: {a: []}\n"), jobs=1)
    assert out.strip() == ",".join(ex.SWEEP_HEADER)


def test_sweep_records_bad_points():
    rows = _rows(ex.sweep(ex.parse_spec(VALID + "grid: {a: [0.2, 0.8]}\n"), jobs=1))
    assert rows[0]["error"] == "" and "(0, 1/2)" in rows[1]["error"]


def test_sweep_lambda_axis_peaks_at_c1_optimum(tmp_path, capsys):
    text = VALID + "method: C1\ngrid: {lambda: [" + ", ".join(map(str, range(2, 41))) + "]}\n"
    assert main(["sweep", _write(tmp_path, text), "--jobs", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    best = max(rows, key=lambda r: float(r["p_c"]))
    assert best["lambda"] == "25"


def test_reproduce_table1(capsys):
    assert main(["reproduce", "table1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [(r["method"], r["lambda"]) for r in rows] == [("Ezhov", "4"), ("C1", "25"), ("C2", "4")]


def test_reproduce_table2(capsys):
    assert main(["reproduce", "table2"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [int(r["lambda"]) for r in rows] == [33, 20, 10, 13, 21, 14, 20, 12]


def test_reproduce_example1_wrong_b(capsys):
    assert main(["reproduce", "example1-wrongB"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["lambda"] == 9 and info["wrong_b"] is True


@pytest.mark.parametrize("fig_id,rows", [(2, 41), (3, 8), (9, 41)])
def test_reproduce_figures(capsys, fig_id, rows):
    assert main(["reproduce", "fig", str(fig_id)]) == 0
    assert len(_rows(capsys.readouterr().out)) == rows


def test_reproduce_unknown_figure():
    assert main(["reproduce", "fig", "1"]) == 2
    assert main(["reproduce", "fig"]) == 2


def test_storage_demo(tmp_path, capsys):
    pats = _write(tmp_path, "; stored patterns\n0110\n1001\n#15\n", "p.txt")
    assert main(["storage-demo", pats, "--out", str(tmp_path / "o")]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["m"] == 3 and info["max_deviation"] < 1e-9
    assert info["gate_count"] <= 5 * 3 * 4
    assert (tmp_path / "o" / "storage_circuit.txt").read_text().count("\n") == info["gate_count"]


def test_storage_demo_bad_file(tmp_path):
    assert main(["storage-demo", _write(tmp_path, "01x\n", "p.txt")]) == 2


def test_jobs_must_be_positive(tmp_path):
    assert main(["sweep", _write(tmp_path, VALID), "--jobs", "0"]) == 2


@pytest.mark.skipif(shutil.which("qamem") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = subprocess.run(["qamem", "reproduce", "table1"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("method,lambda")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qamem.cli", "reproduce", "fig", "7", "--horizon", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and len(out.stdout.splitlines()) == 5
