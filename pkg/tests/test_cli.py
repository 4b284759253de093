import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from gentrig.cli import run
from gentrig.convexity import Margin, Property, ScanReport, Verdict, scan
from gentrig.core import FunctionKind
from gentrig.report import CSV_HEADER, exit_status, fmt, scan_from_csv, scan_from_json, scan_to_csv, scan_to_json

SIN_LOG_CONCAVE_SCAN = ["scan", "--property", "log-concave", "--kind", "sin", "--p-min", "0.25", "--p-max", "16",
      "--p-steps", "32", "--y-min", "0.05", "--y-max", "0.95", "--y-steps", "19"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# -- eval / derivs ------------------------------------------------------------------


def test_eval_example():
    code, out, _ = call("eval", "--kind", "sin", "--p", "2", "--y", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"].startswith("0.84147098480789")
    assert {"quad_err", "root_residual"} <= rows[0].keys()


def test_eval_json():
    code, out, _ = call("eval", "--kind", "tanh", "--p", "3", "--y", "0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1 and doc["kind"] == "tanh"


def test_derivs_json():
    code, out, _ = call("derivs", "--kind", "cos", "--p", "3", "--y", "0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["d2logg_dp2"] < 0


def test_version():
    with pytest.raises(SystemExit) as info:
        run(["--version"], io.StringIO(), io.StringIO())
    assert info.value.code == 0


# -- exit statuses ------------------------------------------------------------------


def test_exit_0_theorem_scan():
    code, out, _ = call(*SIN_LOG_CONCAVE_SCAN)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert len([ln for ln in lines if ln]) == 1 + 32 * 19
    assert "\r" not in out


def test_exit_1_negative_control():
    code, out, _ = call("scan", "--property", "log-convex", "--kind", "tan", "--p-min", "0.05",
                        "--p-max", "0.95", "--p-steps", "8", "--y-min", "0.1", "--y-max", "0.6",
                        "--y-steps", "4")
    assert code == 1
    assert ",Fails" in out


def test_exit_3_loose_tolerance():
    code, out, _ = call("turan", "--kind", "sin", "--p", "3", "--y", "0.5", "--tol", "10")
    assert code == 3
    assert out.strip().endswith("Inconclusive")


def test_turan_example():
    code, out, _ = call("turan", "--kind", "tan", "--p", "3", "--y", "0.5")
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert code == 0 and row["property"] == "TuranTan" and row["verdict"] == "Holds"
    assert float(row["margin"]) > float(row["err_bound"])


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--property", "log-concave", "--kind", "sin", "--p-min", "2", "--p-max", "1", "--y", "0.5"],
        ["scan", "--property", "nonsense", "--kind", "sin", "--p", "2", "--y", "0.5"],
        ["scan", "--property", "turan-sin", "--kind", "tan", "--p", "2", "--y", "0.5"],
        ["scan", "--property", "concave", "--kind", "sec", "--p", "2", "--y", "0.5"],
        ["scan", "--property", "concave", "--kind", "tanh", "--p", "2", "--y-min", "1", "--y-max", "2",
         "--y-steps", "0"],
        ["eval", "--kind", "sin", "--p", "2"],
        ["eval", "--kind", "sin", "--p", "-1", "--y", "0.5"],
        ["eval", "--kind", "sin", "--p", "2", "--y", "0.5", "--tol", "0"],
        ["turan", "--kind", "cosh", "--p", "3", "--y", "1"],
        ["lemma3", "--p", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_exit_2_usage(argv):
    code, out, err = call(*argv)
    assert code == 2
    assert err.startswith("gentrig: error:")
    assert out == ""


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("GENTRIG_THREADS", "zero")
    code, _, err = call("turan", "--kind", "sin", "--p", "3", "--y", "0.5")
    assert code == 2 and "GENTRIG_THREADS" in err


def test_exit_status_rule():
    ok, bad, unk = Margin(1.0, 0.1), Margin(-1.0, 0.1), Margin(0.0, 0.1)
    rep = lambda row, ys=(0.5, 2.0): ScanReport(FunctionKind.SIN, Property.LOG_CONCAVE, (2.0,), ys, (row,))
    assert exit_status(rep((ok, ok))) == 0
    # an inconclusive cell outside the proved region does not count
    assert exit_status(rep((ok, unk))) == 0
    assert exit_status(rep((unk, ok))) == 3
    assert exit_status(rep((unk, bad))) == 1


# -- output files ---------------------------------------------------------------------


def test_output_file_atomic(tmp_path):
    path = tmp_path / "t1.csv"
    path.write_text("stale")
    code, out, _ = call("turan", "--kind", "sinh", "--p-min", "1.5", "--p-max", "6", "--p-steps", "3",
                        "--y-min", "0.5", "--y-max", "3", "--y-steps", "3", "--output", str(path))
    assert code == 0 and out == ""
    data = path.read_bytes()
    assert data.startswith(b"property,kind,p,y,margin,err_bound,verdict\n")
    assert b"\r" not in data
    assert sorted(os.listdir(tmp_path)) == ["t1.csv"]


def test_json_output(tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = call("scan", "--property", "concave", "--kind", "tanh", "--p-min", "0.5", "--p-max", "4",
                      "--p-steps", "3", "--y-min", "0.5", "--y-max", "3", "--y-steps", "2",
                      "--format", "json", "--output", str(path))
    doc = json.loads(path.read_text())
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["config"]["mode"] == "analytic" and "rel_tol" in doc["config"] and "threads" in doc["config"]
    assert all(all(row) for row in doc["asserted"])


def test_lemma3_and_find_p0():
    code, out, _ = call("lemma3", "--p-steps", "3", "--s-steps", "3")
    assert code == 0
    assert out.strip().split("\n")[-1].startswith("constant,")
    code, out, _ = call("find-p0", "--y-min", "0.3", "--y-max", "0.6", "--y-steps", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["witness"]) == 2
    assert 0 < doc["p0_estimate"] < 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gentrig", "eval", "--kind", "cos", "--p", "2", "--y", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.5403023058681" in proc.stdout


# -- serialisation round trips ----------------------------------------------------------


@pytest.fixture(scope="module")
def mixed_report():
    # some cells Fail, some Hold, one raises
    return scan("LogConvex", [0.1, 0.3, 2.0], [0.2, 0.6, 1.6], kind="tan", threads=1)


def test_csv_round_trip(mixed_report):
    text = scan_to_csv(mixed_report)
    back = scan_from_csv(text)
    assert back == mixed_report
    assert scan_to_csv(back) == text
    assert {m.verdict for _, _, m in back.cells()} == set(Verdict)


def test_json_round_trip(mixed_report):
    text = scan_to_json(mixed_report)
    back = scan_from_json(text)
    assert back == mixed_report
    assert back.config == mixed_report.config
    assert scan_to_json(back) == text


def test_csv_rejects_tampering(mixed_report):
    text = scan_to_csv(mixed_report).replace("Holds", "Fails", 1)
    with pytest.raises(ValueError):
        scan_from_csv(text)
    with pytest.raises(ValueError):
        scan_from_csv("a,b\n1,2\n")


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(math.pi)) == math.pi
    assert fmt(math.inf) == "inf" and fmt(-math.inf) == "-inf" and fmt(math.nan) == "nan"
