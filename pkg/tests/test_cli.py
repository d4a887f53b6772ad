import json
import subprocess
import sys

import jsonschema
import pytest

from langtrotter import cli
from langtrotter.schema import SCHEMAS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace_plain(capsys):
    code, out, _ = run(capsys, "trace", "--p", "5", "--a", "1", "--b", "0", "--format", "plain")
    assert code == 0
    assert "r=2" in out.splitlines()


def test_constants_r0(capsys):
    code, out, _ = run(capsys, "constants", "--r", "0", "--truncation", "1000000")
    doc = json.loads(out)
    assert code == 0
    assert round(doc["value"], 6) == 0.387018
    assert abs(doc["truncated"] - doc["value"]) < 1e-6


INVOCATIONS = {
    "trace": ["--p", "13", "--a", "2", "--b", "3"],
    "distribution": ["--p", "13", "--r", "2"],
    "classnum": ["--D", "-44"],
    "isoclasses": ["--p", "13", "--r", "3"],
    "charcheck": ["--q", "15"],
    "boxcount": ["--p", "13", "--r", "2", "--A", "13", "--B", "13"],
    "constants": ["--r", "2", "--truncation", "10000"],
    "lemma3": ["--x", "1000", "--r", "1"],
    "average": ["--x", "60", "--A", "12", "--B", "12", "--r", "1", "--timing"],
    "moment": ["--x", "60", "--A", "12", "--B", "12", "--r", "1"],
    "census": ["--x", "60", "--A", "12", "--B", "12", "--r", "1"],
    "verify-all": ["--max-p", "23"],
}


@pytest.mark.parametrize("command", sorted(INVOCATIONS))
def test_json_reports_validate(capsys, command):
    code, out, _ = run(capsys, command, *INVOCATIONS[command], "--threads", "2")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS[command])
    assert json.loads(json.dumps(doc)) == doc


@pytest.mark.parametrize("command", sorted(INVOCATIONS))
@pytest.mark.parametrize("fmt", ["csv", "plain"])
def test_other_formats(capsys, command, fmt):
    code, out, _ = run(capsys, command, *INVOCATIONS[command], "--format", fmt)
    assert code == 0 and out.strip()


def test_average_csv_header(capsys):
    _, out, _ = run(capsys, "average", "--x", "40", "--A", "9", "--B", "9", "--r", "0", "--format", "csv")
    assert out.splitlines()[0] == "p,N_r,H_rp,contrib"


def test_isoclasses_reports_H(capsys):
    _, out, _ = run(capsys, "isoclasses", "--p", "5", "--r", "2")
    doc = json.loads(out)
    assert doc["class_count"] == doc["H"] == 2


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "trace", "--p", "5", "--a", "1", "--b", "0", "--bogus", "1")[0] == 2
    assert run(capsys, "trace", "--p", "5")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "average", "--x", "60", "--A", "5", "--B", "5", "--r", "1", "--threads", "0")[0] == 2


def test_domain_errors_exit_2(capsys):
    code, _, err = run(capsys, "trace", "--p", "7", "--a", "0", "--b", "0")
    assert code == 2 and "singular" in err
    assert run(capsys, "classnum", "--D", "5")[0] == 2
    assert run(capsys, "average", "--x", "60", "--A", "0", "--B", "5", "--r", "1")[0] == 2


def test_resource_error_exit_3(capsys):
    code, _, err = run(capsys, "average", "--x", "9000", "--A", "5", "--B", "5", "--r", "1")
    assert code == 3 and "9000" in err


def test_verification_failure_exit_1(capsys, monkeypatch):
    from langtrotter import verify

    def broken(max_p):
        return [verify.CheckResult("broken", False, 1, ["boom"])]

    monkeypatch.setattr(verify, "run_all", broken)
    code, out, _ = run(capsys, "verify-all")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_all_default(capsys):
    code, out, _ = run(capsys, "verify-all", "--max-p", "61")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert {c["name"] for c in doc["checks"]} >= {
        "class_number_identity",
        "orbit_sizes",
        "isomorphism_criterion",
        "character_orthogonality",
        "polya_vinogradov",
        "path_equivalence",
    }


def test_hypothesis_warnings_are_logged(capsys, caplog):
    code, out, _ = run(capsys, "average", "--x", "100", "--A", "5", "--B", "5", "--r", "1")
    assert code == 0 and "does not hold" in caplog.text
    assert json.loads(out)["warnings"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "langtrotter.cli", "trace", "--p", "5", "--a", "4", "--b", "0"],
        capture_output=True,
        text=True,
        env={"LC_ALL": "de_DE.UTF-8", "PATH": ""},
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["r"] == -2
