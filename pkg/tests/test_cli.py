"""Command-line interface: output format, exit codes, CSV determinism."""

import json
import math

import numpy as np
import pytest

import qcbound as qb
from qcbound.cli import main

PI = math.pi


def test_bound_ho_prints_twelve_significant_digits(capsys):
    code = main(["bound", "ho", "--omega", "1", "--t", "3.14159265"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "3.14159265"


def test_bound_iho(capsys):
    code = main(["bound", "iho", "--Omega", "2", "--t", "3"])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "6"


def test_bound_zero_time(capsys):
    code = main(["bound", "ho", "--omega", "1", "--t", "0"])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "0"


def test_bound_divergent_exit_code(capsys):
    code = main(["bound", "ho_linear", "--omega", "1", "--lambda", "0.3",
                 "--t", repr(2 * PI)])
    out = capsys.readouterr().out
    assert code == 3
    assert out.startswith("inf ")


def test_bound_displacement_reports_alternate(capsys):
    code = main(["bound", "displacement", "--re", "1", "--im", "0"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "1.41421356237"
    assert "product-form alternate value: 2" in out


def test_bad_usage_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["bound", "unknown_system", "--t", "1"])
    assert err.value.code == 2


def test_invalid_parameter_exits_two(capsys):
    code = main(["bound", "ho", "--omega", "-1", "--t", "1"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_unknown_figure_exits_two(capsys):
    code = main(["figure", "fig99"])
    assert code == 2


def test_figure_grid_validation(capsys):
    code = main(["figure", "fig2", "--t-min", "2", "--t-max", "1"])
    assert code == 2


def test_fig2_csv_structure_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["figure", "fig2", "--out", str(out1)]) == 0
    assert main(["figure", "fig2", "--out", str(out2)]) == 0
    data1 = out1.read_bytes()
    assert data1 == out2.read_bytes()
    assert b"\r" not in data1

    lines = data1.decode().splitlines()
    assert lines[0] == "t,value,branch,divergent"
    rows = [ln.split(",") for ln in lines[1:]]
    ts = np.array([float(r[0]) for r in rows])
    vals = np.array([float(r[1]) for r in rows])
    # sawtooth zeros at multiples of 4 pi
    for n in (0, 1, 2):
        k = int(np.argmin(np.abs(ts - 4 * PI * n)))
        assert vals[k] <= 1e-9
    assert np.max(vals) <= 2 * PI + 1e-9


def test_fig3_has_gap_rows(tmp_path):
    out = tmp_path / "fig3.csv"
    # grid that hits the pole at t = 2 pi exactly
    assert main(["figure", "fig3", "--out", str(out),
                 "--t-min", "0", "--t-max", repr(4 * PI), "--t-steps", "5"]) == 0
    lines = out.read_text().splitlines()
    gap = [ln for ln in lines[1:] if ln.split(",")[3] == "1"]
    assert len(gap) == 1
    t_gap = float(gap[0].split(",")[0])
    assert t_gap == pytest.approx(2 * PI, rel=1e-12)
    assert gap[0].split(",")[1] == ""


def test_fig5_series_sweep(tmp_path):
    out = tmp_path / "fig5.csv"
    assert main(["figure", "fig5", "--out", str(out),
                 "--t-steps", "11"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,value,branch,divergent,series"
    series = {ln.rsplit(",", 1)[1] for ln in lines[1:]}
    assert series == {"p=1", "p=5", "p=10", "p=100"}


def test_fig6_zero_coupling_series_matches_uncoupled_formula(tmp_path):
    out = tmp_path / "fig6.csv"
    assert main(["figure", "fig6", "--out", str(out), "--mu-values", "0",
                 "--t-min", "0", "--t-max", "2", "--t-steps", "5"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,value,branch,divergent"
    for ln in lines[1:]:
        t, val = float(ln.split(",")[0]), float(ln.split(",")[1])
        sp = qb.reduce_periodic((2.0 + 1.0) * t, 4 * PI)
        sm = qb.reduce_periodic((2.0 - 1.0) * t, 4 * PI)
        assert val == pytest.approx(math.sqrt(0.5 * (sp ** 2 + sm ** 2)),
                                    abs=1e-9)


def test_fig7_emits_finite_curve_away_from_poles(tmp_path):
    out = tmp_path / "fig7.csv"
    assert main(["figure", "fig7", "--out", str(out),
                 "--t-min", "0.1", "--t-max", "2.0", "--t-steps", "20"]) == 0
    lines = out.read_text().splitlines()
    assert all(ln.split(",")[3] == "0" for ln in lines[1:])


def test_verify_algebra_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "algebra", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["suite"] == "algebra"
    assert all(set(c) == {"name", "residual", "pass"} for c in report["checks"])
    assert all(c["pass"] for c in report["checks"])


def test_algebra_export(capsys):
    code = main(["algebra", "export", "ho4"])
    out = capsys.readouterr().out
    assert code == 0
    data = json.loads(out)
    assert data["labels"] == ["E", "P", "Q", "H"]
    entries = [list(e) for e in data["entries"]]
    assert [1, 2, 0, -1.0] in entries          # [P, Q] = -i E, upper triangle
    assert all(i < j for i, j, _, _ in entries)


def test_algebra_export_unknown(capsys):
    code = main(["algebra", "export", "nope"])
    assert code == 2
