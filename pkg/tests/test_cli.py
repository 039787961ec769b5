import json
import math
import subprocess
import sys

import pytest

from toeplitz_spectra.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main


@pytest.fixture
def symbol_file(tmp_path):
    path = tmp_path / "sym.json"
    path.write_text(json.dumps({"min_k": -1, "coeffs": ["-2", "2", "-1"]}))
    return path


def test_expand_recover_predict_round_trip(tmp_path, symbol_file, capsys):
    out = tmp_path / "run"
    args = ["--symbol", str(symbol_file), "--n0", "7", "--alpha", "2", "--bits", "128", "--out", str(out)]
    assert main(["expand", *args]) == EXIT_OK
    assert (out / "table.csv").exists() and (out / "table.json").exists()
    assert "c0: max" in capsys.readouterr().out

    assert main(["recover", "--out", str(out)]) == EXIT_OK
    doc = json.loads((out / "recovered.json").read_text())
    assert doc["rctp_degree"] == 1 and doc["bits"] == 128 and len(doc["ghat"]) == 7
    assert (out / "ghat_abs.csv").read_text().startswith("k,abs_ghat")

    assert main(["predict", "--table", str(out / "table.csv"), "--n", "40", "--out", str(out)]) == EXIT_OK
    lines = (out / "prediction_n40.csv").read_text().splitlines()
    assert len(lines) == 41
    smallest = 2 - 2 * math.sqrt(2) * math.cos(math.pi / 41)
    assert abs(float(lines[1].split(",")[2]) - smallest) < 1e-12


def test_exact_with_perfect_grid(tmp_path):
    assert main(["exact", "--preset", "example1", "--n", "6", "--out", str(tmp_path)]) == EXIT_OK
    lines = (tmp_path / "exact_n6.csv").read_text().splitlines()
    assert lines[0] == "j,theta,lambda,xi,residual"
    j, theta, lam, xi, res = lines[3].split(",")
    assert abs(float(theta) - float(xi)) < 1e-30


def test_exact_falls_back_to_eigensolver(tmp_path, capsys):
    assert main(["exact", "--preset", "example2", "--n", "5", "--bits", "128", "--out", str(tmp_path)]) == EXIT_OK
    assert "no closed form" in capsys.readouterr().err
    assert len((tmp_path / "exact_n5.csv").read_text().splitlines()) == 6


def test_compare_reports(tmp_path):
    assert main(["compare", "--preset", "example1", "--n", "20", "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "compare_report.json").read_text())
    assert report["n"] == 20 and report["high_bits"] == 128
    assert report["max_deviation"] < 1e-8
    for name in ("spectrum_double.csv", "spectrum_double_transpose.csv", "spectrum_128.csv"):
        assert (tmp_path / name).exists()


def test_quadrature(tmp_path, capsys):
    assert main(["quadrature", "--g", "bilaplacian", "--K", "3", "--out", str(tmp_path)]) == EXIT_OK
    rows = (tmp_path / "quadrature_bilaplacian.csv").read_text().splitlines()
    assert [round(float(r.split(",")[1]), 10) for r in rows[1:]] == [6.0, -4.0, 1.0]


def test_missing_symbol_file_is_input_error(tmp_path, capsys):
    code = main(["expand", "--symbol", str(tmp_path / "nope.json"), "--n0", "5", "--alpha", "1",
                 "--bits", "128", "--out", str(tmp_path)])
    assert code == EXIT_INPUT
    assert "not found" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["expand", "--n0", "5", "--alpha", "1", "--bits", "128"],
    ["expand", "--preset", "example5", "--n0", "2"],
    ["expand", "--preset", "example5", "--alpha", "-1"],
    ["expand", "--preset", "example5", "--bits", "60"],
    ["expand", "--preset", "nope"],
    ["predict", "--n", "10"],
    ["quadrature"],
    ["frobnicate"],
])
def test_input_errors(argv, tmp_path):
    assert main([*argv, "--out", str(tmp_path)] if argv[0] != "frobnicate" else argv) == EXIT_INPUT


def test_malformed_symbol_is_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["exact", "--symbol", str(bad), "--n", "5", "--bits", "128", "--out", str(tmp_path)]) == EXIT_INPUT


def test_pseudospectrum_is_numeric_failure(tmp_path, symbol_file, capsys):
    code = main(["expand", "--symbol", str(symbol_file), "--n0", "100", "--alpha", "1", "--bits", "53",
                 "--out", str(tmp_path)])
    assert code == EXIT_NUMERIC
    assert "Decrease n0 or alpha" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == EXIT_OK


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "toeplitz_spectra", "quadrature", "--g", "bilaplacian",
                           "--K", "2", "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and "ghat_0" in proc.stdout
