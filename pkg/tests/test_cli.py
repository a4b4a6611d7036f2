import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from dekpoly import cli

FIX = Path(__file__).parent / "fixtures"


def run(argv, capsys):
    rc = cli.main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_gen_pretty_default(capsys):
    rc, out, _ = run(["gen", "--max-n", "2"], capsys)
    assert rc == cli.EXIT_OK
    assert out.startswith("# ")
    assert "x^3+3x" in out


def test_gen_json(capsys):
    rc, out, _ = run(["gen", "--family", "hermite", "--max-n", "4", "--format", "json"], capsys)
    assert rc == 0
    data = json.loads(out)
    assert data["config"]["family"] == "hermite"


def test_gen_csv_columns(capsys):
    rc, out, _ = run(["gen", "--max-n", "3", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["n", "R_n", "S_n"]
    assert len(rows) == 5


@pytest.mark.parametrize("argv", [
    ["gen", "--family", "chebyshev1", "--max-n", "6", "--format", "json"],
    ["zeros", "--family", "hermite", "--poly", "S", "--n", "7"],
    ["zeros", "--family", "chebyshev1", "--poly", "R", "--n", "9"],
])
def test_deterministic(argv, capsys):
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second and first[0] == 0


@pytest.mark.parametrize("suite", cli.SUITES)
def test_verify_chebyshev_suites_pass(suite, capsys):
    rc, out, _ = run(["verify", suite, "--max-n", "8"], capsys)
    assert rc == 0, out
    report = json.loads(out)
    assert report["passed"] is True


@pytest.mark.parametrize("suite", ["biortho", "christoffel", "factorization", "zeros"])
def test_verify_hermite_suites_pass(suite, capsys):
    rc, out, _ = run(["verify", suite, "--family", "hermite", "--max-n", "8"], capsys)
    assert rc == 0, out


def test_hermite_norm_check_reports_observed_value(capsys):
    # the closed norm formula disagrees with quadrature (see README); the
    # suite records the observed multiple of sqrt(2pi) and signals the failure
    rc, out, _ = run(["verify", "orthogonality", "--family", "hermite", "--max-n", "4"], capsys)
    report = json.loads(out)
    assert rc == cli.EXIT_IDENTITY
    assert report["checks"][0]["ok"] is True
    assert report["checks"][2]["detail"] == "observed 10.0 sqrt(2pi)"


def test_zeros_csv(capsys):
    rc, out, _ = run(["zeros", "--family", "hermite", "--poly", "S", "--n", "3"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["poly_kind", "n", "re", "im", "multiplicity"]
    assert [r[2] for r in rows[1:]] == ["-2.0", "0", "2.0"]


def test_zeros_of_constant_is_header_only(capsys):
    rc, out, _ = run(["zeros", "--poly", "S", "--n", "0"], capsys)
    assert rc == 0 and out.strip() == "poly_kind,n,re,im,multiplicity"


def test_factor_dump(capsys):
    rc, out, _ = run(["factor-dump", "--max-n", "6"], capsys)
    assert rc == 0
    data = json.loads(out)
    assert {"A", "B", "J", "BA"} <= set(data)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "gen.json"
    rc, out, _ = run(["gen", "--format", "json", "-o", str(target)], capsys)
    assert rc == 0 and out == ""
    json.loads(target.read_text())


def test_io_error_exit(tmp_path, capsys):
    rc, _, err = run(["gen", "-o", str(tmp_path / "missing" / "x.txt")], capsys)
    assert rc == cli.EXIT_IO and "I/O" in err


def test_degenerate_custom_family(capsys):
    rc, _, err = run(["gen", "--family", "custom", "--path", str(FIX / "degenerate_custom.json")], capsys)
    assert rc == cli.EXIT_DEGENERATE


def test_custom_family_matches_chebyshev(capsys):
    # same recurrence, base constants rescaled by pi: identical R_n
    rc, out, _ = run(["gen", "--family", "custom", "--path", str(FIX / "chebyshev_like_custom.json"),
                      "--max-n", "3", "--format", "csv"], capsys)
    assert rc == 0
    r1 = list(csv.reader(io.StringIO(out)))[2][1]
    assert r1 == "x^3+3x"


@pytest.mark.parametrize("argv", [
    ["gen", "--family", "custom"],
    ["gen", "--precision", "32"],
    ["gen", "--max-n", "-1"],
    ["nonsense"],
    ["verify", "nope"],
])
def test_config_errors(argv, capsys):
    assert run(argv, capsys)[0] == cli.EXIT_CONFIG


def test_config_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"family": "hermite", "max_n": 7, "precision": 300}))
    monkeypatch.setenv(cli.PRECISION_ENV, "400")
    args = cli.build_parser().parse_args(["gen", "--config", str(conf), "--max-n", "3"])
    cfg = cli.resolve_config(args)
    assert (cfg["family"], cfg["max_n"], cfg["precision"]) == ("hermite", 3, 300)
    args = cli.build_parser().parse_args(["gen"])
    assert cli.resolve_config(args)["precision"] == 400


def test_bad_config_file(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"colour": "red"}))
    assert run(["gen", "--config", str(conf)], capsys)[0] == cli.EXIT_CONFIG


def test_env_precision_invalid(monkeypatch, capsys):
    monkeypatch.setenv(cli.PRECISION_ENV, "lots")
    assert run(["gen"], capsys)[0] == cli.EXIT_CONFIG


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "dekpoly.cli", "gen", "--max-n", "1", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "x^3+3x" in proc.stdout
