import csv
import io
import json
import math

import pytest

from vbs_ge.cli import GE_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _csv_body(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.reader(lines))


def test_compute_json(capsys):
    code, out = run(capsys, "compute", "--spin", "1", "--length", "10")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["spin"] == 1 and doc["config"]["version"]
    assert doc["eps"] == pytest.approx(1.3849698, abs=1e-6)
    assert [r["sector"] for r in doc["rows"]] == ["even", "odd"]


def test_compute_zero_overlap_is_not_an_error(capsys):
    code, out = run(capsys, "compute", "--spin", "1", "--length", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["eps"] == "inf"
    assert all(r["exact_zero"] for r in doc["rows"])


def test_compute_csv_columns_and_config(capsys):
    code, out = run(capsys, "compute", "--spin", "2", "--length", "6", "--bc", "obc-asymptotic", "--format", "csv")
    assert code == 0
    assert "# bc: obc-asymptotic" in out
    body = _csv_body(out)
    assert body[0] == GE_COLUMNS
    assert len(body) == 3


def test_single_edge(capsys):
    code, out = run(capsys, "compute", "--spin", "1", "--length", "6", "--bc", "obc", "--edge", "1,2")
    assert code == 0
    assert json.loads(out)["rows"][0]["bc"] == "obc(1,2)"


def test_json_values_round_trip(capsys):
    _, out = run(capsys, "compute", "--spin", "3", "--length", "12")
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert json.dumps(doc, indent=2) + "\n" == out


def test_simulate_is_reproducible(capsys, tmp_path):
    args = ["simulate", "--spin", "2", "--length", "6", "--samples", "25", "--seed", "5", "--format", "csv"]
    path = tmp_path / "a.csv"
    contents = []
    for _ in range(2):
        assert main(args + ["--output", str(path)]) == 0
        contents.append(path.read_bytes())
    assert contents[0] == contents[1]
    body = _csv_body(contents[0].decode())
    assert len(body) == 26
    assert all(float(r[body[0].index("value")]) >= 0 for r in body[1:])


def test_simulate_summary(capsys):
    _, out = run(capsys, "simulate", "--spin", "1", "--length", "8", "--samples", "50", "--mode", "perm-invariant")
    summ = json.loads(out)["summary"]
    assert summ["min"] >= summ["analytic_eps"] - 1e-12
    assert summ["below_analytic"] == 0


def test_sweep_with_error_cells(capsys):
    code, out = run(capsys, "sweep", "--spins", "1,2", "--lengths", "1,4", "--sector", "even")
    doc = json.loads(out)
    assert code == 0
    assert [(r["s"], r["L"]) for r in doc["rows"]] == [(1, 1), (1, 4), (2, 1), (2, 4)]
    assert len(doc["errors"]) == 2
    assert doc["rows"][0]["eps"] is None


def test_fit_command(capsys):
    code, out = run(capsys, "fit", "--spins", "2,4,6,8", "--lengths", "100,120,140")
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"][0]["parity"] == "even"
    assert doc["rows"][0]["rms_residual"] < 1e-6
    assert {r["log_base"] for r in doc["published_comparison"]} == {2.0, math.e, 10.0}


def test_oracle_command(capsys):
    code, out = run(capsys, "oracle", "--spin", "1", "--length", "4", "--restarts", "4")
    doc = json.loads(out)
    assert code == 0
    for row in doc["rows"][:-1]:
        assert row["abs_diff"] < 1e-12
    assert doc["optimum"] == pytest.approx(4 / 21, rel=1e-6)


def test_oracle_respects_dense_cap(capsys):
    code, out = run(capsys, "oracle", "--spin", "2", "--length", "8", "--dense-cap", "1000")
    assert code == 1
    assert json.loads(out)["error"]["type"] == "DenseCapExceeded"


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--spin", "0"],
        ["compute", "--length", "1"],
        ["compute", "--edge", "1,1"],
        ["compute", "--bc", "obc", "--edge", "9,1"],
        ["simulate", "--samples", "0"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 1
    assert "error" in json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["compute", "--bc", "open"], ["compute", "--spin", "x"], ["compute", "--edge", "1"], []],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    assert main(["compute", "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["config"]["output"] == str(path)
