import json
import subprocess
import sys

import pytest

from gl2hecke.cli import main
from gl2hecke.suite import SuiteConfig, run


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table2_small_primes(capsys):
    code, out, _ = run_cli(capsys, "--primes", "3,5,7", "--checks", "table2")
    assert code == 0
    assert "overall: PASS" in out
    assert "2^20 * 3^9" in out


def test_json_det_total(capsys):
    code, out, _ = run_cli(capsys, "--prime", "3", "--checks", "table2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["primes"][0]["det_total"] == "8"
    assert data["status"] == "pass"


def test_csv_rows(capsys):
    code, out, _ = run_cli(capsys, "--primes", "3,5", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "p,check,status,detail"
    assert len(lines) == 1 + 2 * 8
    assert code == 0


def test_seventeen_text(capsys):
    code, out, _ = run_cli(capsys, "--prime", "17", "--checks", "table2")
    assert code == 0 and "19^32" in out


@pytest.mark.parametrize("args", [["--prime", "2"], ["--prime", "9"], ["--primes", "3,x"],
                                  ["--checks", "bogus"], ["--prime", "3", "--primes", "5"],
                                  ["--prime", "23"], ["--prime", "1019", "--mode", "charsum"]])
def test_usage_errors(capsys, args):
    code = None
    try:
        code = main(args)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_allow_large_guard(capsys):
    code, out, _ = run_cli(capsys, "--prime", "23", "--mode", "charsum", "--checks", "table2,nonvanishing")
    assert code == 0
    assert "overall: PASS" in out


def test_skips_for_large_charsum(capsys):
    code, out, _ = run_cli(capsys, "--prime", "23", "--mode", "charsum", "--format", "csv")
    rows = [line.split(",")[:3] for line in out.strip().splitlines()[1:]]
    status = {check: s for _, check, s in rows}
    assert status["structure"] == "skip" and status["table2"] == "pass"
    assert code == 0


def test_relations_example(capsys):
    code, out, _ = run_cli(capsys, "--prime", "11", "--checks", "relations")
    assert code == 0 and "pass" in out


def test_deterministic_json(capsys):
    _, a, _ = run_cli(capsys, "--primes", "3,5", "--format", "json")
    _, b, _ = run_cli(capsys, "--primes", "5,3", "--format", "json")
    assert a == b


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "--prime", "5", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["primes"][0]["p"] == 5


def test_unwritable_out(tmp_path, capsys):
    code, _, err = run_cli(capsys, "--prime", "3", "--out", str(tmp_path / "missing" / "r.txt"))
    assert code == 2 and "cannot write" in err


def test_failure_exit_code(monkeypatch, capsys):
    from gl2hecke import suite
    from gl2hecke.suite import CheckResult

    monkeypatch.setitem(suite.CHECK_FUNCTIONS, "table2",
                        lambda ctx, cfg: CheckResult("table2", "fail", "forced"))
    code, out, _ = run_cli(capsys, "--prime", "3", "--checks", "table2")
    assert code == 1 and "forced" in out and "overall: FAIL" in out


def test_threads(monkeypatch):
    monkeypatch.setenv("GL2HECKE_THREADS", "3")
    report = run(SuiteConfig(primes=[3, 5, 7], checks=("table2",)))
    assert report.ok and [pr.p for pr in report.primes] == [3, 5, 7]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gl2hecke", "--prime", "3", "--checks", "table2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "overall: PASS" in proc.stdout
