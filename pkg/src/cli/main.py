import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import pandas as pd
import typer
from pydantic import ValidationError

from src.calibration.bet_fit import detect_type_iv, fit_bet
from src.calibration.engine import FitReport
from src.calibration.sensor_fit import calibrate_sensor
from src.cli.config import RunConfig
from src.cli.io import read_calibration, read_isotherm, read_scattering, read_trace, write_table
from src.hysteresis.filling import loop_area
from src.hysteresis.state import Branch
from src.pore_structure.distribution import classify_pore_width
from src.pore_structure.scattering import LorentzianParams, estimate_lorentzian_init, fit_lorentzian
from src.quantities.units import Temperature
from src.twin.maintenance import peak_drift_offset, schedule_bakes
from src.twin.params import SensorParams
from src.twin.params_io import dump_params
from src.twin.readout import average_sensitivity, response_curve
from src.twin.simulator import simulate_trace
from src.twin.state import TwinState
from src.utils.error_handler import ConvergenceError, TwinError
from src.utils.logger import setup_logging

logger = logging.getLogger("rh_twin.cli.main")

EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3

app = typer.Typer(
    name="rh-twin",
    help="Digital twin and calibration toolkit for capacitive porous-alumina RH sensors.",
    no_args_is_help=True,
    add_completion=False,
)


class CliState:
    def __init__(self, config: RunConfig, params: SensorParams, out: Optional[Path]):
        self.config = config
        self.params = params
        self.out = out

    @property
    def ambient(self) -> Temperature:
        return Temperature.from_celsius(self.config.ambient_c)


@contextmanager
def cli_errors() -> Iterator[None]:
    """Map package errors to exit codes: 2 for bad input, 3 for non-convergence."""
    try:
        yield
    except ConvergenceError as e:
        typer.echo(f"error: {e.detail}", err=True)
        raise typer.Exit(EXIT_NO_CONVERGENCE)
    except (TwinError, ValidationError, pd.errors.ParserError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_INPUT)
    except OSError as e:
        typer.echo(f"error: {e.strerror or e}: {e.filename or ''}".rstrip(": "), err=True)
        raise typer.Exit(EXIT_INPUT)


def emit_text(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as file:
        file.write(text)


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="YAML run configuration."),
    set_: Optional[List[str]] = typer.Option(None, "--set", help="Override key=value; repeatable."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file; stdout when omitted."),
    params_file: Optional[Path] = typer.Option(None, "--params", help="Sensor parameter file (key = value)."),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level, e.g. INFO."),
) -> None:
    with cli_errors():
        run_config = RunConfig.load(config, set_ or ())
        setup_logging(level=log_level or run_config.log_level)
        params = run_config.sensor_params(params_file)
    ctx.obj = CliState(run_config, params, out)


@app.command()
def loop(
    ctx: typer.Context,
    samples: Optional[int] = typer.Option(None, "--samples", min=2, help="Grid points from 0 to 100 %RH."),
) -> None:
    """Major hysteresis loop as rh_percent,c_asc_pf,c_desc_pf."""
    state: CliState = ctx.obj
    with cli_errors():
        samples = samples or state.config.loop.samples
        ascending = response_curve(state.params, state.ambient, Branch.ASCENDING, samples)
        descending = response_curve(state.params, state.ambient, Branch.DESCENDING, samples)
        frame = pd.DataFrame(
            {
                "rh_percent": ascending.x * 100.0,
                "c_asc_pf": ascending.picofarads,
                "c_desc_pf": descending.picofarads,
            }
        )
        write_table(frame, state.out)
        logger.info(f"Loop area {loop_area(ascending.points, descending.points) * 100.0:.6g} pF*%RH")


@app.command()
def simulate(ctx: typer.Context, trace: Path = typer.Argument(..., help="Environment trace CSV.")) -> None:
    """Run the twin over an environment trace; writes t_s,capacitance_pf."""
    state: CliState = ctx.obj
    with cli_errors():
        rows = read_trace(trace)
        initial = _initial_state(rows, state)
        readings = simulate_trace(rows, state.params, initial)
        frame = pd.DataFrame(
            {"t_s": [r.t for r in readings], "capacitance_pf": [r.capacitance_pf for r in readings]},
            columns=["t_s", "capacitance_pf"],
        )
        write_table(frame, state.out)


def _initial_state(rows, state: CliState) -> TwinState:
    if not rows:
        return TwinState.baked(state.ambient.kelvin)
    return TwinState.baked(rows[0].temperature.kelvin, clock=rows[0].t)


def _report_lines(report: FitReport) -> List[str]:
    lines = [
        f"converged: {str(report.converged).lower()}",
        f"iterations: {report.iterations}",
        f"residual_norm_pf: {report.residual_norm:.9g}",
    ]
    lines += [f"{name}: {value:.9g}" for name, value in zip(report.names, report.params)]
    lines += [f"warning: {w}" for w in report.warnings]
    return lines


@app.command()
def calibrate(
    ctx: typer.Context,
    data: Path = typer.Argument(..., help="Calibration CSV (rh_percent,capacitance_pf,branch,temp_c)."),
    free: Optional[str] = typer.Option(None, "--free", help="Comma-separated free parameters."),
    report_path: Optional[Path] = typer.Option(None, "--report", help="Report file; stdout when omitted."),
) -> None:
    """Fit sensor parameters; writes the parameter file and a report."""
    state: CliState = ctx.obj
    mask = state.config.calibration.free if free is None else [s.strip() for s in free.split(",") if s.strip()]
    if not mask:
        raise typer.BadParameter("at least one free parameter is required", param_hint="--free")

    with cli_errors():
        dataset = read_calibration(data)
        try:
            fitted, report = calibrate_sensor(dataset, state.params, mask, state.config.optimizer)
        except ConvergenceError as e:
            if e.report is None or e.best_params is None:
                raise
            fitted, report = e.best_params, e.report

        temperatures = [p.temperature.kelvin for p in dataset.points]
        kelvin = sum(temperatures) / len(temperatures) if temperatures else state.ambient.kelvin
        lo, hi = state.config.calibration.sensitivity_range
        curve = response_curve(fitted, kelvin, Branch.ASCENDING)
        sensitivity = average_sensitivity(curve, lo, hi)

        lines = _report_lines(report)
        lines.append(f"sensitivity_pf_per_percent_rh_{lo * 100:.0f}_{hi * 100:.0f}: {sensitivity:.9g}")
        report_text = "".join(f"# {line}\n" for line in lines)

        emit_text(dump_params(fitted), state.out)
        if report_path is not None or state.out is not None:
            emit_text(report_text, report_path)
        else:
            emit_text("\n" + report_text, None)

    if not report.converged:
        typer.echo(f"error: calibration did not converge ({report.message})", err=True)
        raise typer.Exit(EXIT_NO_CONVERGENCE)


@app.command("bet-fit")
def bet_fit(
    ctx: typer.Context,
    isotherm: Path = typer.Argument(..., help="Isotherm CSV (p_over_p0,amount)."),
    lo: Optional[float] = typer.Option(None, "--lo", help="Lower p/p0 of the BET window."),
    hi: Optional[float] = typer.Option(None, "--hi", help="Upper p/p0 of the BET window."),
) -> None:
    """Linear BET fit with monolayer point and type-IV flag."""
    state: CliState = ctx.obj
    default_lo, default_hi = state.config.calibration.bet_range
    with cli_errors():
        points = read_isotherm(isotherm)
        fit = fit_bet(points, (default_lo if lo is None else lo, default_hi if hi is None else hi))
        lines = [
            f"v_m: {fit.v_m:.9g}",
            f"c: {fit.c:.9g}",
            f"r2: {fit.r2:.9g}",
            f"points: {fit.n_points}",
            f"monolayer_point: {fit.monolayer_point:.9g}",
            f"type_iv: {'yes' if detect_type_iv(points) else 'no'}",
        ]
        emit_text("".join(f"{line}\n" for line in lines), state.out)


@app.command("gisaxs-fit")
def gisaxs_fit(ctx: typer.Context, curve: Path = typer.Argument(..., help="Scattering CSV (q_inv_angstrom,intensity).")) -> None:
    """Lorentzian fit of a scattering curve; reports mean pore radius and width."""
    state: CliState = ctx.obj
    with cli_errors():
        scattering = read_scattering(curve)
        report = fit_lorentzian(scattering, estimate_lorentzian_init(scattering))
        fitted = LorentzianParams(i0=report.params[0], r=report.params[1])
        lines = [
            f"i0: {fitted.i0:.9g}",
            f"r_angstrom: {fitted.r:.9g}",
            f"width: {fitted.width_nm:.2f} nm",
            f"class: {classify_pore_width(fitted.width_nm)}",
            f"iterations: {report.iterations}",
            f"residual_norm: {report.residual_norm:.9g}",
        ]
        emit_text("".join(f"{line}\n" for line in lines), state.out)


@app.command()
def maintenance(
    ctx: typer.Context,
    trace: Path = typer.Argument(..., help="Environment trace CSV."),
    bake_interval_h: Optional[float] = typer.Option(None, "--bake-interval-h", help="Hours between bakes."),
) -> None:
    """Compare peak drift offset with and without scheduled bakes."""
    state: CliState = ctx.obj
    interval_h = state.config.maintenance.bake_interval_h if bake_interval_h is None else bake_interval_h
    if interval_h <= 0:
        raise typer.BadParameter("bake interval must be positive", param_hint="--bake-interval-h")

    with cli_errors():
        params = state.params
        rows = read_trace(trace)
        initial = _initial_state(rows, state)
        baked_rows, bakes = schedule_bakes(rows, interval_h * 3600.0, params, state.config.maintenance.warmup_s)
        unbaked_peak = peak_drift_offset(rows, params, initial)
        baked_peak = peak_drift_offset(baked_rows, params, initial)

        lines = [
            f"bake_interval_h: {interval_h:.9g}",
            f"bakes: {bakes}",
            f"peak_offset_unbaked_pf: {unbaked_peak:.9g}",
            f"peak_offset_baked_pf: {baked_peak:.9g}",
        ]
        for i, segment in enumerate(params.thermal.heaters, start=1):
            lines.append(f"segment_{i}_bake_voltage_v: {segment.drive_voltage(segment.max_power):.9g}")
        emit_text("".join(f"{line}\n" for line in lines), state.out)
