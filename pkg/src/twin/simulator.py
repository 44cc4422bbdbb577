import logging
import math
from typing import Iterator, List, Sequence, Tuple

from src.hysteresis.state import update
from src.quantities.constants import CELSIUS_OFFSET
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.twin.model import diffusion_equilibrium, physics_temperature, quasi_static_reading
from src.twin.params import HEATER_SEGMENTS, SensorParams, ThermalParams
from src.twin.state import Ambient, EnvironmentRow, TraceReading, TwinState
from src.utils.error_handler import DomainError, FormatError, require_finite

logger = logging.getLogger("rh_twin.twin.simulator")


def steady_state_temperature(thermal: ThermalParams, ambient_kelvin: float, powers: Sequence[float]) -> float:
    """Element temperature the heaters settle at: T_amb + sum(P_i Rth_i)."""
    return ambient_kelvin + sum(p * seg.thermal_resistance for p, seg in zip(powers, thermal.heaters))


def _check_powers(powers: Sequence[float]) -> Tuple[float, ...]:
    powers = tuple(float(p) for p in powers)
    if len(powers) != HEATER_SEGMENTS:
        raise DomainError(f"expected {HEATER_SEGMENTS} heater powers, got {len(powers)}")
    for i, p in enumerate(powers):
        require_finite(f"heater power {i + 1}", p)
        if p < 0:
            raise DomainError(f"heater power {i + 1} must be non-negative, got {p}")
    return powers


def _advance(
    state: TwinState,
    ambient: Ambient,
    powers: Tuple[float, ...],
    dt: float,
    params: SensorParams,
) -> Tuple[TwinState, Capacitance]:
    x = ambient.rh.x
    thermal, drift = params.thermal, params.drift

    target = steady_state_temperature(thermal, ambient.temperature.kelvin, powers)
    element_temp = target + (state.element_temp - target) * math.exp(-dt / thermal.thermal_time_constant)
    sorption_temp = physics_temperature(element_temp)

    s_eq = diffusion_equilibrium(x, sorption_temp, thermal)
    lag = thermal.lag_in if s_eq > state.diffusion_state else thermal.lag_out
    diffusion_state = s_eq + (state.diffusion_state - s_eq) * math.exp(-dt / lag)
    diffusion_state = min(max(diffusion_state, 0.0), 1.0)

    hysteresis = update(state.hysteresis.model_copy(update={"temperature": sorption_temp}), x)

    if element_temp < drift.bake_temp_k:
        drift_level = 1.0 - (1.0 - state.drift_level) * math.exp(-drift.rate * x * dt)
    else:
        drift_level = state.drift_level * math.exp(-5.0 * dt / drift.bake_time)
    drift_level = min(max(drift_level, 0.0), 1.0)

    reading = quasi_static_reading(params, hysteresis, element_temp, diffusion_state, drift_level)
    new_state = TwinState(
        hysteresis=hysteresis,
        drift_level=drift_level,
        element_temp=element_temp,
        diffusion_state=diffusion_state,
        clock=state.clock + dt,
    )
    return new_state, reading


def step(
    state: TwinState,
    ambient: Ambient,
    heater_power: Sequence[float],
    dt: float,
    params: SensorParams,
) -> Tuple[TwinState, Capacitance]:
    """
    Advance the twin by dt seconds.

    Order within a step: element temperature, wall moisture load, pore
    widening, hysteresis, drift, reading.

    Args:
        state: Twin state at the start of the interval
        ambient: RH and temperature over the interval
        heater_power: Eight segment powers in W
        dt: Interval length in s, > 0
        params: Sensor parameters

    Returns:
        (new state, reading at the end of the interval)
    """
    dt = require_finite("dt", dt)
    if dt <= 0:
        raise DomainError(f"time step must be positive, got {dt}")
    return _advance(state, ambient, _check_powers(heater_power), dt, params)


def run_trace(
    env: Sequence[EnvironmentRow],
    params: SensorParams,
    initial: TwinState,
) -> Iterator[Tuple[EnvironmentRow, TwinState, Capacitance]]:
    """
    Yield (row, state after the row, reading) for each environment row.

    The first row advances from initial.clock, or is applied instantly when
    it is not later than that clock.

    Raises:
        FormatError: If timestamps are not strictly increasing (1-based row)
    """
    state = initial
    previous_t = None
    for i, row in enumerate(env):
        t = require_finite("t", row.t)
        if previous_t is None:
            dt = max(t - initial.clock, 0.0)
        else:
            dt = t - previous_t
            if dt <= 0:
                raise FormatError(f"timestamp {t} does not increase past {previous_t}", row=i + 1)
        state, reading = _advance(state, row.ambient, _check_powers(row.heater_powers), dt, params)
        state = state.model_copy(update={"clock": t})
        previous_t = t
        yield row, state, reading


def simulate_trace(
    env: Sequence[EnvironmentRow],
    params: SensorParams,
    initial: TwinState,
) -> List[TraceReading]:
    """One reading per environment row."""
    readings = [TraceReading(t=row.t, capacitance_pf=reading.picofarads) for row, _, reading in run_trace(env, params, initial)]
    logger.info(f"Simulated {len(readings)} trace rows")
    return readings


def temperature_sweep(
    params: SensorParams,
    x: float,
    low_c: float,
    high_c: float,
    step_c: float = 1.0,
    dwell_s: float = 60.0,
    settle_steps: int = 0,
    initial: TwinState = None,
) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]], TwinState]:
    """
    Constant-RH heat-up then cool-down, heaters off.

    The ambient steps by step_c every dwell_s; settle_steps extra dwells are
    spent at the top and again at the bottom. Without an initial state the
    run starts settled at low_c: memory at x, wall load at equilibrium.

    Returns:
        (heat-up branch, cool-down branch, final state); branches are
        (temperature in C, capacitance in pF) lists in sweep order
    """
    if not high_c > low_c or step_c <= 0 or dwell_s <= 0:
        raise DomainError("sweep needs low < high, a positive step and a positive dwell")
    low_k = low_c + CELSIUS_OFFSET
    if initial is None:
        start = TwinState.baked(physics_temperature(low_k))
        initial = start.model_copy(
            update={
                "hysteresis": update(start.hysteresis, x),
                "diffusion_state": diffusion_equilibrium(x, physics_temperature(low_k), params.thermal),
            }
        )

    count = int(round((high_c - low_c) / step_c))
    up = [low_c + i * step_c for i in range(count + 1)]
    down = up[::-1]
    rh = RelHumidity(x=x)
    off = (0.0,) * HEATER_SEGMENTS

    state = initial
    heat_up, cool_down = [], []
    for branch, temps in ((heat_up, up), (cool_down, down)):
        for temp_c in temps:
            state, reading = step(state, Ambient(rh=rh, temperature=Temperature.from_celsius(temp_c)), off, dwell_s, params)
            branch.append((temp_c, reading.picofarads))
        for _ in range(settle_steps):
            state, reading = step(state, Ambient(rh=rh, temperature=Temperature.from_celsius(temps[-1])), off, dwell_s, params)
    return heat_up, cool_down, state

