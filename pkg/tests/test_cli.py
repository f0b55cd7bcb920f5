import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from shgsqueeze import SweepTable
from shgsqueeze.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fig1_golden(capsys):
    code, out, err = run(capsys, "fig1", "--m-max", "20", "--format", "csv")
    assert code == 0 and err == ""
    assert out == (DATA / "fig1_m20.csv").read_text()


def test_spectrum_single_row(capsys):
    code, out, _ = run(capsys, "spectrum", "--m", "2.5", "--eta", "1.75", "--omega-max", "0")
    assert code == 0
    table = SweepTable.from_csv(out)
    assert len(table.rows) == 1
    assert table.column("s_minus")[0] == pytest.approx(0.19095776, abs=1e-8)


def test_spectrum_fraction_flag(capsys):
    code, out, _ = run(capsys, "spectrum", "--m", "2.5", "--fraction", "0.5", "--omega-max", "0",
                       "--format", "json")
    assert code == 0
    table = SweepTable.from_json(out)
    assert table.metadata["eta_in"] == 1.75


def test_marginal_point_exit_1(capsys):
    code, out, err = run(capsys, "spectrum", "--m", "2.5", "--fraction", "1.0")
    assert code == 1
    assert out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("error: kind=instability message=")
    json.loads(lines[0].split("message=", 1)[1])


@pytest.mark.parametrize("argv", [
    ["spectrum", "--m", "2.5", "--mu", "1"],
    ["spectrum", "--m", "1", "--eta", "0.1", "--fraction", "0.2"],
    ["spectrum", "--eta", "0.1"],
    ["steady-state", "--m", "1"],
    ["fig1", "--bogus"],
    ["nope"],
    ["spectrum", "--gamma-c", "1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_invalid_physical_parameter_exit_1(capsys):
    code, _, err = run(capsys, "steady-state", "--gamma-c", "-1", "--mu", "1", "--alpha-in", "1")
    assert code == 1
    assert "kind=parameter_domain" in err


def test_steady_state(capsys):
    code, out, _ = run(capsys, "steady-state", "--gamma-c", "1", "--gamma-s", "0", "--mu", "1",
                       "--alpha-in", str(math.sqrt(2)), "--format", "json")
    assert code == 0
    row = SweepTable.from_json(out).row_at(math.sqrt(2))
    assert row["alpha_amp"] == pytest.approx(1.0, rel=1e-12)
    assert abs(row["residual"]) <= 1e-9 * math.sqrt(2)


def test_stability_scaled_and_physical(capsys):
    code, out, _ = run(capsys, "stability", "--m", "2.5", "--eta", "1.75")
    row = SweepTable.from_csv(out).row_at(2.5)
    assert (row["lambda_minus"], row["lambda_plus"]) == (-10.25, -1.75)
    assert row["stable"] == 1.0

    code, out, _ = run(capsys, "stability", "--gamma-c", "1", "--mu", "1", "--alpha-in", "3",
                       "--beta-in", "0.5", "--phi", "0.3")
    assert code == 0
    t = SweepTable.from_csv(out)
    assert t.column("lambda_plus")[0] == pytest.approx(t.column("lambda_plus_numeric")[0], rel=1e-12)


def test_stability_reports_unstable_point(capsys):
    code, out, _ = run(capsys, "stability", "--m", "1", "--fraction", "1.0")
    assert code == 0
    row = SweepTable.from_csv(out).row_at(1.0)
    assert row["stable"] == 0.0 and row["lambda_plus"] == 0.0


def test_spectrum_physical_with_oracle(capsys):
    code, out, _ = run(capsys, "spectrum", "--gamma-c", "0.6", "--gamma-s", "0.4", "--mu", "0.5",
                       "--alpha-in", "4", "--beta-in", "0.3", "--phi", "0.2",
                       "--omega-max", "5", "--omega-steps", "6", "--with-oracle")
    assert code == 0
    assert SweepTable.from_csv(out).column("max_rel_dev").max() <= 1e-10


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--random", "50", "--seed", "3")
    assert code == 0
    t = SweepTable.from_csv(out)
    assert t.column("max_rel_error")[0] <= 1e-10
    assert t.column("samples")[0] == 50


def test_oracle_check_tolerance_failure(capsys):
    code, _, err = run(capsys, "oracle-check", "--m", "20", "--eta", "10.5", "--tol", "0")
    assert code in (0, 1)
    if code == 1:
        assert "kind=tolerance" in err


def test_fig2_calibration_and_output_file(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SHGSQUEEZE_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "fig2", "--power-calibration", "1.0", "--format", "json",
                       "--output", "sub/fig2.json")
    assert code == 0 and out == ""
    table = SweepTable.from_json((tmp_path / "sub" / "fig2.json").read_text())
    assert table.row_at(2.5)["p_out_mw_f0"] == 25.0


def test_fig2_bad_calibration(capsys):
    code, _, err = run(capsys, "fig2", "--power-calibration", "0")
    assert code == 1 and "parameter_domain" in err


def test_fig1_fraction_one_refused(capsys):
    code, _, err = run(capsys, "fig1", "--fractions", "0,1")
    assert code == 1 and "instability" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shgsqueeze", "fig2", "--m-steps", "3", "--m-max", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert SweepTable.from_csv(proc.stdout).row_at(2.5)["p_out_mw_f0"] == pytest.approx(65.0)


def test_repeated_runs_identical(capsys):
    outs = [run(capsys, "fig1")[1] for _ in range(2)] + [run(capsys, "fig2")[1] for _ in range(2)]
    assert outs[0] == outs[1] and outs[2] == outs[3]
