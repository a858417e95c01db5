import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from hitchin.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main
from hitchin.nilstrata import NilpotentStratumLabel
from hitchin.numerology import StratumLabel


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_dims_example(capsys):
    code, out, _ = run(capsys, "dims", "--g", "2", "--d", "3", "--n", "2", "--format", "json")
    assert code == EXIT_OK
    assert out == '{"d_base":7,"d_fiber":6,"d_total":13,"gap":-1}\n'


def test_support_canonical_example(capsys):
    rows = run_json(capsys, "support", "--g", "2", "--d", "2", "--n", "2", "--canonical")
    assert len(rows) == 3 and all(r["verdict"] == "NotExcluded" for r in rows)
    for r in rows:
        StratumLabel(r["lambda"])


def test_verify_example(capsys):
    report = run_json(capsys, "verify", "--q", "2", "--d", "1", "--n", "2", "--e", "0",
                      "--label", "1,1", "--deg", "0,0", "--convention", "sat", "--window", "6")
    assert report["identity"]["chain"] == "3/2"
    assert report["identity"]["verdict"] == "PASS"
    assert report["value"] == "3/2" and report["convention"] == "sat"
    label = NilpotentStratumLabel(report["label"]["nbar"], report["label"]["ebar"])
    assert label.e == report["e"]


def test_strata_and_nilpotent(capsys):
    rows = run_json(capsys, "strata", "--n", "3", "--g", "2", "--d", "3")
    assert len(rows) == 5 and sum(r["elliptic"] for r in rows) == 1
    report = run_json(capsys, "nilpotent", "--g", "0", "--d", "2", "--n", "2", "--bound", "4")
    assert report["max_dim"] == 0 and report["attained_by"] == [[1, 1]]
    assert "rows" not in report


def test_ledger_from_file(capsys, tmp_path):
    path = tmp_path / "components.json"
    path.write_text(json.dumps([{"n": 1, "d_a": 2, "delta": 0}, {"n": 1, "d_a": 2, "delta": 0}]))
    report = run_json(capsys, "ledger", "--g", "2", "--d", "3", "--components", str(path))
    assert report["verdict"] == "Excluded" and report["upper"] == 3


def test_spectral_point_and_sampling(capsys):
    out = run_json(capsys, "spectral", "--d", "1", "--n", "2", "--q", "5", "--a", ";0,4")
    assert out["profile"] == [[2, 1]] and out["status"] == "nonzero-squarefree"
    assert out["pushforward"] == [1, 1]
    out = run_json(capsys, "spectral", "--d", "1", "--n", "2", "--q", "5", "--count", "0")
    assert out["rows"] == []
    out = run_json(capsys, "spectral", "--d", "1", "--n", "2", "--q", "5", "--count", "7",
                   "--force-zero")
    assert out["fractions"]["nilpotent"] == "1/1"


def test_count_and_chain(capsys):
    out = run_json(capsys, "count", "--q", "2", "--label", "2", "--deg", "0", "--window", "4")
    assert Fraction(out["value"]) == Fraction(1, 6) + Fraction(1, 8) + Fraction(1, 32)
    out = run_json(capsys, "count", "--q", "2", "--label", "1,1", "--chain", "1,0")
    assert out["value"] == "3/1"


def test_bun_verify_exit_codes(capsys):
    code, out, err = run(capsys, "verify", "--bun", "--q", "3", "--n", "2", "--e", "0",
                         "--window", "20")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "PASS"
    # window too small for the tolerance: the report is still printed
    code, out, err = run(capsys, "verify", "--bun", "--q", "3", "--n", "2", "--e", "0",
                         "--window", "4")
    assert code == EXIT_FAILED
    assert json.loads(out)["verdict"] == "FAIL"
    assert json.loads(err)["exit"] == EXIT_FAILED


@pytest.mark.parametrize("argv", [
    ["dims", "--g", "2", "--d", "1", "--n", "2"],
    ["dims", "--g", "2", "--d", "3"],
    ["dims", "--g", "2", "--d", "3", "--n", "2", "--bogus", "1"],
    ["spectral", "--d", "1", "--n", "2", "--q", "4"],
    ["spectral", "--d", "1", "--n", "2", "--q", "5", "--seed", "-1"],
    ["count", "--q", "2", "--label", "1,1", "--deg", "0,1"],
    ["frobnicate"],
])
def test_validation_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INVALID
    assert out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["exit"] == EXIT_INVALID


def test_csv_columns_sorted(capsys):
    code, out, _ = run(capsys, "support", "--g", "2", "--d", "3", "--n", "2", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == sorted(rows[0]) == ["lambda", "lhs", "rhs", "verdict"]
    assert len(rows) == 4


def test_table_format(capsys):
    code, out, _ = run(capsys, "dims", "--g", "2", "--d", "3", "--n", "2", "--format", "table")
    assert code == EXIT_OK
    header, values = out.splitlines()
    assert header.split() == ["d_base", "d_fiber", "d_total", "gap"]
    assert values.split() == ["7", "6", "13", "-1"]


def test_no_floats_anywhere(capsys):
    for argv in (["verify", "--bun", "--q", "2", "--n", "1", "--e", "0"],
                 ["spectral", "--d", "1", "--n", "3", "--q", "3", "--count", "9"]):
        code, out, _ = run(capsys, *argv)
        assert code == EXIT_OK
        json.loads(out, parse_float=lambda s: pytest.fail(f"float {s} in report"))


def _cli(args, workers):
    env = dict(os.environ, HITCHIN_WORKERS=str(workers))
    return subprocess.run([sys.executable, "-m", "hitchin", *args], env=env,
                          capture_output=True, check=True).stdout


def test_byte_identical_across_workers():
    for args in (["spectral", "--d", "1", "--n", "3", "--q", "5", "--count", "60", "--seed", "9"],
                 ["count", "--q", "2", "--n", "3", "--d", "0", "--label", "1,2", "--deg", "0,0",
                  "--window", "1"]):
        outputs = {_cli(args, w) for w in (1, 2, 4)}
        assert len(outputs) == 1


def test_bad_worker_env(monkeypatch, capsys):
    monkeypatch.setenv("HITCHIN_WORKERS", "0")
    code, _, err = run(capsys, "dims", "--g", "0", "--d", "1", "--n", "1")
    assert code == EXIT_INVALID and "HITCHIN_WORKERS" in err
