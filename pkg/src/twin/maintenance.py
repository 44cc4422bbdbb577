import bisect
import logging
from typing import List, Sequence, Tuple

from src.twin.params import SensorParams
from src.twin.simulator import run_trace, steady_state_temperature
from src.twin.state import EnvironmentRow, TwinState
from src.utils.error_handler import DomainError, FormatError

logger = logging.getLogger("rh_twin.twin.maintenance")


def schedule_bakes(
    env: Sequence[EnvironmentRow],
    interval_s: float,
    params: SensorParams,
    warmup_s: float = 60.0,
) -> Tuple[List[EnvironmentRow], int]:
    """
    Insert periodic full-power bakes into an environment trace.

    A bake starts every interval_s after the first row and keeps all
    segments at full power for warmup_s + bake_time. Inserted rows hold the
    ambient of the latest original row; original rows inside a bake window
    get full power.

    Returns:
        (rows sorted by time, number of bakes)
    """
    if interval_s <= 0:
        raise DomainError(f"bake interval must be positive, got {interval_s}")
    if not env:
        return [], 0

    thermal, drift = params.thermal, params.drift
    window = warmup_s + drift.bake_time
    full = thermal.full_power()
    ambient_k = env[0].temperature.kelvin
    if steady_state_temperature(thermal, ambient_k, full) < drift.bake_temp_k:
        logger.warning(
            f"Full heater power settles below {drift.bake_temp_c:g} C at the trace's ambient; bakes will not reverse drift"
        )

    for i in range(1, len(env)):
        if env[i].t <= env[i - 1].t:
            raise FormatError(f"timestamp {env[i].t} does not increase past {env[i - 1].t}", row=i + 1)

    start, end = env[0].t, env[-1].t
    bake_starts = []
    t = start + interval_s
    while t < end:
        bake_starts.append(t)
        t += interval_s

    times = [row.t for row in env]
    by_time = {row.t: row for row in env}
    for t0 in bake_starts:
        for t in (t0, t0 + warmup_s, t0 + window):
            if t not in by_time and t <= end:
                source = env[bisect.bisect_right(times, t) - 1]
                by_time[t] = source.model_copy(update={"t": t})

    def in_window(t: float) -> bool:
        i = bisect.bisect_left(bake_starts, t) - 1
        return i >= 0 and bake_starts[i] < t <= bake_starts[i] + window

    rows = []
    for t in sorted(by_time):
        row = by_time[t]
        if in_window(t):
            row = row.model_copy(update={"heater_powers": full})
        rows.append(row)
    logger.info(f"Scheduled {len(bake_starts)} bakes over {end - start:.0f} s")
    return rows, len(bake_starts)


def peak_drift_offset(env: Sequence[EnvironmentRow], params: SensorParams, initial: TwinState) -> float:
    """Largest drift offset D * max_offset reached along a trace, in pF."""
    peak = initial.drift_level
    for _, state, _ in run_trace(env, params, initial):
        peak = max(peak, state.drift_level)
    return peak * params.drift.max_offset
