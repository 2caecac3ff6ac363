import json
import os
import subprocess
import sys

import pytest

from equivar.cli import UsageError, main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("0..2") == [0, 1, 2]
    assert parse_range("3,0, 1") == [0, 1, 3]
    for bad in ("a", "2..1", "1..x"):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--m", "3", "--p", "1", "--q", "0", "--k", "1", "--l", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["dimension"] == 1 and obj["path"] == "direct" and obj["stabilized"]
    code, out, _ = run(capsys, "classify", "--m", "3", "--p", "0", "--q", "0", "--k", "0", "--l", "0")
    assert code == 0 and json.loads(out)["dimension"] == 1


def test_classify_usage_errors(capsys):
    code, out, err = run(capsys, "classify", "--m", "2", "--p", "2", "--q", "3", "--k", "1", "--l", "0")
    assert code == 2 and "exceed" in err and not out
    assert run(capsys, "classify", "--m", "3", "--p", "1", "--q", "2", "--k", "0")[0] == 2
    assert run(capsys, "classify", "--m", "x", "--p", "0", "--q", "0", "--k", "0")[0] == 2
    assert run(capsys, "classify", "--m", "3", "--p", "0", "--q", "0", "--k", "0", "--g", "-1")[0] == 2


def test_classify_several_cells_and_both_paths(capsys):
    code, out, _ = run(capsys, "classify", "--m", "3", "--p", "1", "--q", "1", "--k", "0..1", "--path", "both")
    assert code == 0
    objs = json.loads(out)
    assert [(o["k"], o["path"], o["dimension"]) for o in objs] == [
        (0, "direct", 1), (0, "ansatz", 1), (1, "direct", 2), (1, "ansatz", 2)]


def test_table_default_grid_matches(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("| m | p | q | k | l |")
    body = lines[2:]
    assert body and all("| match |" in ln for ln in body)


def test_table_with_dimension_two_row(capsys):
    code, out, _ = run(capsys, "table", "--m", "4", "--p", "2", "--q-offsets", "0", "--k", "1", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "m,p,q,k,l,direct,ansatz,expected,status,stabilized"
    assert rows[1] == "4,2,2,1,1,2,-,2,match,yes"


def test_table_borderline_rows(capsys):
    code, out, _ = run(capsys, "table", "--m", "2", "--p", "1", "--k", "1", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows and all(r["status"] == "borderline" for r in rows)


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "dstar", "--m", "3", "--p", "2", "--k", "1", "--n", "3")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(capsys, "verify", "K1p", "--m", "3", "--p", "1", "--n", "3", "--format", "json")
    assert code == 0 and json.loads(out)["ok"]
    assert run(capsys, "verify", "K1p", "--m", "1", "--p", "1")[0] == 2
    assert run(capsys, "verify", "nope", "--m", "3")[0] == 2


def test_properties_command(capsys):
    code, out, _ = run(capsys, "properties", "--n", "2", "--format", "json")
    assert code == 0
    assert all(r["ok"] for r in json.loads(out))


def test_config_file_and_out(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("m = 3\np = 1\nq = 0\nk = 1\nl = 2\nformat = json\n")
    dest = tmp_path / "res.json"
    code, out, _ = run(capsys, "classify", "--config", str(cfg), "--out", str(dest))
    assert code == 0 and not out
    assert json.loads(dest.read_text())["dimension"] == 1
    # command line wins over the file
    code, out, _ = run(capsys, "classify", "--config", str(cfg), "--k", "0", "--l", "1")
    assert code == 0 and json.loads(out)["k"] == 0
    cfg.write_text("colour = blue\n")
    assert run(capsys, "classify", "--config", str(cfg))[0] == 2
    assert run(capsys, "classify", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_markdown_classify_output(capsys):
    code, out, _ = run(capsys, "classify", "--m", "3", "--p", "0", "--q", "0", "--k", "1", "--format", "markdown")
    assert code == 0
    assert "| 3 | 0 | 0 | 1 | 1 | 2 | - | 2 | direct | yes |" in out


def _cli(args, env=None):
    full = dict(os.environ)
    full.update(env or {})
    return subprocess.run([sys.executable, "-m", "equivar"] + args, capture_output=True, env=full, check=False)


def test_byte_identical_runs_and_threads():
    args = ["classify", "--m", "3", "--p", "0..1", "--q", "0..1", "--k", "1", "--l", "1", "--seed", "4"]
    a = _cli(args)
    b = _cli(args)
    c = _cli(args, {"EQUIVAR_THREADS": "2"})
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout == c.stdout
    assert len(json.loads(a.stdout)) == 4
