import csv
import subprocess
import sys

import pytest

from susy_immersion.harness import CSV_HEADER, RunConfig, main, read_config

SMALL = ["--grid", "3", "--range=-1.5,1.5"]


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("argv", [
    ["case", "--case", "kink"],
    ["case", "--case", ","],
    ["case", "--grid", "1"],
    ["case", "--range=2,-2"],
    ["case", "--lambda", "-1"],
    ["case", "--jet-order", "2"],
    ["sweep", "--case", "symtafel", "--lambda", "1"],
    ["sweep", "--case", "fermionic-gauge", "--lambda", "1,2"],
])
def test_bad_configuration_exits_2(tmp_path, argv, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_config_file_with_cli_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# demo\ncase = symtafel, bosonic-symmetry\nlambda = 0.5, 2\ngrid = 4\n"
                        "range = 3\ndressing = 0.1, 0.2\n", encoding="utf-8")
    values = read_config(cfg_file)
    cfg = RunConfig.from_mapping(values).validate()
    assert cfg.cases == ["symtafel", "bosonic-symmetry"]
    assert cfg.lambdas == [0.5, 2.0] and cfg.grid == 4
    assert cfg.x_range == (-3.0, 3.0) and cfg.dressing == (0.1, 0.2)
    out = tmp_path / "o"
    assert main(["case", "--config", str(cfg_file), "--case", "symtafel", "--lambda", "1",
                 "--grid", "3", "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["summary.txt", "symtafel_lambda1.csv"]


def test_unknown_config_key(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("lamda = 1\n", encoding="utf-8")
    assert main(["case", "--config", str(cfg_file), "--out", str(tmp_path)]) == 2
    cfg_file.write_text("no equals sign\n", encoding="utf-8")
    assert main(["case", "--config", str(cfg_file), "--out", str(tmp_path)]) == 2


def test_case_csv_layout_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["case", "--case", "symtafel", "--dressing", "--out", str(out)] + SMALL) == 0
    ra, rb = rows(a / "symtafel_lambda1.csv"), rows(b / "symtafel_lambda1.csv")
    assert ra == rb
    assert ra[0] == CSV_HEADER
    parts = {r[3] for r in ra[1:]}
    assert "" in parts
    assert all(p == "" or all(t.isdigit() for t in p.split(".")) for p in parts)
    k_rows = [r for r in ra[1:] if r[2] == "K" and r[3] == ""]
    assert len(k_rows) == 9
    assert max(float(r[8]) for r in k_rows) < 1e-10
    assert all(r[9] == "verified (printed)" for r in k_rows)
    summary = (a / "summary.txt").read_text(encoding="utf-8")
    assert "overall: PASS" in summary


def test_failing_case_exits_1(tmp_path):
    assert main(["case", "--case", "bosonic-symmetry", "--out", str(tmp_path)] + SMALL) == 1
    assert "overall: FAIL" in (tmp_path / "summary.txt").read_text(encoding="utf-8")


def test_report_verb(tmp_path, capsys):
    main(["case", "--case", "symtafel", "--lambda", "1,2", "--out", str(tmp_path)] + SMALL)
    capsys.readouterr()
    assert main(["report", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "report.txt").read_text(encoding="utf-8")
    assert "symtafel_lambda1.csv" in text and "symtafel_lambda2.csv" in text
    assert main(["report", "--out", str(tmp_path / "empty")]) == 2


def test_sweep_verb(tmp_path):
    assert main(["sweep", "--case", "symtafel", "--lambda", "0.5,1,2", "--grid", "3", "--out", str(tmp_path)]) == 0
    assert "pass" in (tmp_path / "sweep.txt").read_text(encoding="utf-8")


def test_check_verb(capsys):
    assert main(["check", "operators"]) == 0
    assert main(["check", "killing", "--alpha", "1"]) == 1
    assert '"passed": false' in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "susy_immersion.harness", "check", "algebra"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stdout + proc.stderr
