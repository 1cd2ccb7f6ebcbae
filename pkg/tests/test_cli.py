import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from goodgen.cli import run

SCHEMA = json.loads(resources.files("goodgen").joinpath("report_schema.json").read_text())


def _run(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _report(argv, capsys, code=0):
    got, out, err = _run(argv, capsys)
    assert got == code, err
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    return rep


def test_orders(capsys):
    rep = _report(["orders", "--type", "Sp", "--n", "2", "--q", "3"], capsys)
    assert rep["result"]["order"] == 51840
    assert rep["schema_version"] == "1.0"
    assert rep["config"]["type"] == "Sp"


def test_phi(capsys):
    assert _report(["phi", "--type", "SU", "--n", "3", "--q", "3"], capsys)["result"]["phi"] == [7]


def test_exact_p1(capsys):
    rep = _report(["exact-p1", "--type", "Sp", "--n", "2", "--q", "2"], capsys)
    assert rep["result"]["p1"] == "11/20"
    assert rep["result"]["bound_satisfied"]
    assert rep["config"]["m"] == 3


@pytest.mark.parametrize("argv", [
    ["good", "--type", "Sp", "--n", "4", "--q", "2"],
    ["classify", "--type", "Sp", "--n", "2", "--q", "2", "--seed", "3", "--oracle"],
    ["estimate-p1", "--type", "Sp", "--n", "2", "--q", "2", "--trials", "300"],
    ["so-audit", "--type", "Sp", "--n", "2", "--q", "2", "--trials", "50"],
    ["sym-audit", "--n", "4", "--p", "2", "--ell", "10"],
    ["bounds", "--type", "SL", "--n", "20", "--q", "4"],
    ["theta", "--k", "1", "--n", "2", "--q", "3"],
])
def test_commands_validate(argv, capsys):
    rep = _report(argv, capsys)
    assert rep["command"] == argv[0]


def test_usage_errors(capsys):
    assert _run(["bogus"], capsys)[0] == 2
    assert _run(["orders", "--type", "Sp", "--n", "2"], capsys)[0] == 2
    assert _run(["phi", "--type", "SU", "--n", "3", "--q", "6"], capsys)[0] == 2
    assert _run(["good", "--type", "Sp", "--n", "4", "--q", "2", "--m", "3"], capsys)[0] == 2
    assert _run(["theta", "--k", "1"], capsys)[0] == 2


def test_violation_exit(capsys):
    code, out, err = _run(["theta", "--nmax", "4", "--qmax", "3"], capsys)
    assert code == 1
    assert "violation" in err
    jsonschema.validate(json.loads(out), SCHEMA)
    assert _run(["theta", "--nmax", "4", "--qmax", "3", "--relaxed"], capsys)[0] == 0


def test_deterministic_json(capsys):
    argv = ["estimate-p1", "--type", "Sp", "--n", "2", "--q", "2", "--trials", "400", "--seed", "9"]
    _, a, _ = _run(argv, capsys)
    _, b, _ = _run(argv, capsys)
    _, c, _ = _run(argv + ["--workers", "2"], capsys)
    assert a == b == c


def test_csv_and_output(tmp_path, capsys):
    path = tmp_path / "r.csv"
    assert run(["orders", "--type", "SL", "--n", "2", "--q", "2", "--format", "csv", "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    rows = path.read_text().splitlines()
    assert rows[0] == "field,value"
    assert "result.order,20160" in rows


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "goodgen.cli", "phi", "--type", "Sp", "--n", "4", "--q", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["result"]["phi"] == [5]
