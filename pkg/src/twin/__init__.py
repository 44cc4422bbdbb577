"""Time-stepping sensor twin: heaters, wall moisture, drift and the inverse readout."""

from src.twin.model import diffusion_equilibrium, physics_temperature, quasi_static_reading, widening_factor
from src.twin.maintenance import peak_drift_offset, schedule_bakes
from src.twin.params import (
    HEATER_SEGMENTS,
    DriftParams,
    HeaterSegment,
    SensorParams,
    ThermalParams,
    apply_overrides,
    default_sensor_params,
    flatten_params,
    get_path,
)
from src.twin.params_io import dump_params, load_params, read_params, write_params
from src.twin.readout import average_sensitivity, invert_reading, response_curve
from src.twin.simulator import run_trace, simulate_trace, steady_state_temperature, step, temperature_sweep
from src.twin.state import Ambient, EnvironmentRow, TraceReading, TwinState

__all__ = [
    "HEATER_SEGMENTS",
    "Ambient",
    "DriftParams",
    "EnvironmentRow",
    "HeaterSegment",
    "SensorParams",
    "ThermalParams",
    "TraceReading",
    "TwinState",
    "apply_overrides",
    "average_sensitivity",
    "default_sensor_params",
    "diffusion_equilibrium",
    "dump_params",
    "flatten_params",
    "get_path",
    "invert_reading",
    "load_params",
    "peak_drift_offset",
    "physics_temperature",
    "quasi_static_reading",
    "read_params",
    "response_curve",
    "run_trace",
    "schedule_bakes",
    "simulate_trace",
    "steady_state_temperature",
    "step",
    "temperature_sweep",
    "widening_factor",
    "write_params",
]
