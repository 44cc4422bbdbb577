import io
import os
import sys

import numpy as np
import pandas as pd
import pytest
from typer.testing import CliRunner

# Add project root to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli.main import EXIT_INPUT, app
from src.pore_structure.scattering import LorentzianParams, lorentzian_intensity
from src.sorption.bet import bet_coverage
from src.twin.params import SensorParams
from src.twin.params_io import read_params
from tests.helpers import synthetic_dataset

SETTINGS = os.path.join(os.path.dirname(__file__), '..', 'config', 'settings.yaml')


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def invoke(runner, *args):
    return runner.invoke(app, ["--config", SETTINGS, *args])


def report_values(text):
    values = {}
    for line in text.splitlines():
        key, sep, value = line.lstrip("# ").partition(": ")
        if sep:
            values[key] = value
    return values


def write_trace(path, rows):
    lines = ["t_s,rh_percent,temp_c"] + [f"{t},{rh},{temp}" for t, rh, temp in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def hourly_trace(path, days, rh=60.0):
    return write_trace(path, [(3600 * i, rh, 25) for i in range(days * 24 + 1)])


def test_loop(runner):
    result = invoke(runner, "loop", "--samples", "11")
    assert result.exit_code == 0, result.stderr
    frame = pd.read_csv(io.StringIO(result.stdout))
    assert list(frame.columns) == ["rh_percent", "c_asc_pf", "c_desc_pf"]
    assert len(frame) == 11
    np.testing.assert_allclose(frame["rh_percent"], np.linspace(0.0, 100.0, 11), atol=1e-9)
    assert (frame["c_desc_pf"] >= frame["c_asc_pf"]).all()


def test_loop_is_deterministic(runner):
    first = invoke(runner, "loop", "--samples", "21")
    second = invoke(runner, "loop", "--samples", "21")
    assert first.exit_code == 0
    assert first.stdout == second.stdout


def test_loop_rejects_single_sample(runner):
    result = invoke(runner, "loop", "--samples", "1")
    assert result.exit_code == EXIT_INPUT


def test_loop_to_unwritable_path(runner, tmp_path):
    result = invoke(runner, "--out", str(tmp_path), "loop", "--samples", "5")
    assert result.exit_code == EXIT_INPUT
    assert "error:" in result.stderr


def test_loop_to_file(runner, tmp_path):
    out = tmp_path / "loop.csv"
    result = invoke(runner, "--out", str(out), "loop", "--samples", "5")
    assert result.exit_code == 0
    assert result.stdout == ""
    assert out.read_text(encoding="utf-8").splitlines()[0] == "rh_percent,c_asc_pf,c_desc_pf"


def test_simulate(runner, tmp_path):
    trace = write_trace(tmp_path / "trace.csv", [(0, 30, 25), (60, 40, 25), (120, 50, 25)])
    result = invoke(runner, "simulate", str(trace))
    assert result.exit_code == 0, result.stderr
    frame = pd.read_csv(io.StringIO(result.stdout))
    assert list(frame.columns) == ["t_s", "capacitance_pf"]
    assert frame["t_s"].tolist() == [0, 60, 120]
    assert frame["capacitance_pf"].is_monotonic_increasing


def test_simulate_non_monotone_time(runner, tmp_path):
    trace = write_trace(tmp_path / "trace.csv", [(0, 30, 25), (60, 40, 25), (30, 50, 25)])
    result = invoke(runner, "simulate", str(trace))
    assert result.exit_code == EXIT_INPUT
    assert "row 3" in result.stderr


def test_simulate_missing_header(runner, tmp_path):
    trace = tmp_path / "trace.csv"
    trace.write_text("time,rh\n0,30\n", encoding="utf-8")
    result = invoke(runner, "simulate", str(trace))
    assert result.exit_code == EXIT_INPUT
    assert "t_s,rh_percent,temp_c" in result.stderr


def test_simulate_missing_file(runner, tmp_path):
    result = invoke(runner, "simulate", str(tmp_path / "absent.csv"))
    assert result.exit_code == EXIT_INPUT


def write_calibration(path, dataset):
    lines = ["rh_percent,capacitance_pf,branch,temp_c"]
    for p in dataset.points:
        lines.append(f"{p.rh.percent!r},{p.capacitance.picofarads!r},{p.branch.label},{p.temperature.celsius!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_calibrate(runner, tmp_path):
    data = write_calibration(tmp_path / "cal.csv", synthetic_dataset(SensorParams()))
    out = tmp_path / "fitted.toml"
    result = invoke(
        runner,
        "--set", "diel.geometry_factor=140",
        "--out", str(out),
        "calibrate", str(data),
        "--free", "diel.geometry_factor,diel.porosity",
    )
    assert result.exit_code == 0, result.stderr
    fitted = read_params(out)
    assert abs(fitted.diel.geometry_factor / 130.0 - 1.0) < 1e-4
    report = report_values(result.stdout)
    assert report["converged"] == "true"
    assert "diel.geometry_factor" in report
    assert float(report["sensitivity_pf_per_percent_rh_20_90"]) > 0


def test_calibrate_report_file(runner, tmp_path):
    data = write_calibration(tmp_path / "cal.csv", synthetic_dataset(SensorParams()))
    report_path = tmp_path / "report.txt"
    result = invoke(runner, "calibrate", str(data), "--free", "diel.geometry_factor", "--report", str(report_path))
    assert result.exit_code == 0, result.stderr
    assert "[diel]" in result.stdout
    assert report_values(report_path.read_text(encoding="utf-8"))["converged"] == "true"


def test_calibrate_bad_inputs(runner, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    assert invoke(runner, "calibrate", str(empty)).exit_code == EXIT_INPUT

    data = write_calibration(tmp_path / "cal.csv", synthetic_dataset(SensorParams()))
    assert invoke(runner, "calibrate", str(data), "--free", "").exit_code == EXIT_INPUT
    assert invoke(runner, "calibrate", str(data), "--free", "thermal.lag_in").exit_code == EXIT_INPUT


def write_isotherm(path, xs, c=50.0):
    lines = ["p_over_p0,amount"] + [f"{x!r},{bet_coverage(x, c)!r}" for x in xs]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_bet_fit(runner, tmp_path):
    isotherm = write_isotherm(tmp_path / "iso.csv", [float(x) for x in np.linspace(0.05, 0.95, 19)])
    result = invoke(runner, "bet-fit", str(isotherm))
    assert result.exit_code == 0, result.stderr
    values = report_values(result.stdout)
    assert abs(float(values["r2"]) - 1.0) < 1e-9
    assert abs(float(values["c"]) - 50.0) < 1e-6
    assert abs(float(values["v_m"]) - 1.0) < 1e-9
    assert values["type_iv"] == "yes"


def test_bet_fit_too_few_points(runner, tmp_path):
    isotherm = write_isotherm(tmp_path / "iso.csv", [0.1, 0.2])
    result = invoke(runner, "bet-fit", str(isotherm))
    assert result.exit_code == EXIT_INPUT


def write_scattering(path, r):
    q = np.linspace(0.01, 0.5, 50)
    intensity = lorentzian_intensity(LorentzianParams(i0=100.0, r=r), q)
    lines = ["q_inv_angstrom,intensity"] + [f"{a!r},{b!r}" for a, b in zip(q.tolist(), intensity.tolist())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_gisaxs_fit(runner, tmp_path):
    result = invoke(runner, "gisaxs-fit", str(write_scattering(tmp_path / "micro.csv", 8.6)))
    assert result.exit_code == 0, result.stderr
    assert "width: 1.72 nm" in result.stdout
    assert report_values(result.stdout)["class"] == "microporous"

    result = invoke(runner, "gisaxs-fit", str(write_scattering(tmp_path / "meso.csv", 45.0)))
    assert result.exit_code == 0, result.stderr
    assert report_values(result.stdout)["class"] == "mesoporous"


def test_gisaxs_empty_file(runner, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("q_inv_angstrom,intensity\n", encoding="utf-8")
    assert invoke(runner, "gisaxs-fit", str(empty)).exit_code == EXIT_INPUT


def test_maintenance(runner, tmp_path):
    trace = hourly_trace(tmp_path / "month.csv", days=10)
    result = invoke(runner, "maintenance", str(trace), "--bake-interval-h", "24")
    assert result.exit_code == 0, result.stderr
    values = report_values(result.stdout)
    assert int(values["bakes"]) == 9
    assert float(values["peak_offset_baked_pf"]) < float(values["peak_offset_unbaked_pf"])
    assert abs(float(values["segment_1_bake_voltage_v"]) - np.sqrt(5.0)) < 1e-8


def test_maintenance_without_drift(runner, tmp_path):
    trace = hourly_trace(tmp_path / "days.csv", days=2)
    result = invoke(runner, "--set", "drift.rate=0", "maintenance", str(trace))
    assert result.exit_code == 0, result.stderr
    values = report_values(result.stdout)
    assert float(values["peak_offset_unbaked_pf"]) == 0.0
    assert float(values["peak_offset_baked_pf"]) == 0.0


def test_maintenance_rejects_bad_interval(runner, tmp_path):
    trace = hourly_trace(tmp_path / "days.csv", days=1)
    result = invoke(runner, "maintenance", str(trace), "--bake-interval-h", "0")
    assert result.exit_code == EXIT_INPUT


def test_unknown_set_key(runner):
    result = invoke(runner, "--set", "diel.bogus=1", "loop")
    assert result.exit_code == EXIT_INPUT
