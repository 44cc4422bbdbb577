import logging
from typing import Union

from src.dielectric.response import ResponseCurve, capacitance, effective_permittivity
from src.hysteresis.filling import branch_curve
from src.hysteresis.state import Branch, HysteresisState, update
from src.quantities.units import Capacitance, HumidityLike, RelHumidity, TemperatureLike, fraction_of, kelvin_of
from src.twin.model import physics_temperature, quasi_static_reading, widening_factor
from src.twin.params import SensorParams
from src.utils.error_handler import QuantityRangeError, ReadingOutOfRangeError, require_finite

logger = logging.getLogger("rh_twin.twin.readout")

BISECTION_STEPS = 60
RANGE_TOLERANCE_PF = 1e-9


def invert_reading(
    reading: Union[Capacitance, float],
    temperature: TemperatureLike,
    state_hint: HysteresisState,
    params: SensorParams,
    diffusion_state: float = 0.0,
    drift_level: float = 0.0,
) -> RelHumidity:
    """
    RH that reproduces a reading when the hinted history moves to it.

    C(x) = reading(update(state_hint, x)) is monotone in x, so the root is
    bracketed on [0, 1] and found by bisection; a flat stretch resolves to
    its lowest RH.

    Raises:
        ReadingOutOfRangeError: If the reading lies outside [C(0), C(1)];
            the error carries the clamped endpoint
    """
    target = reading.picofarads if isinstance(reading, Capacitance) else require_finite("reading", reading)
    kelvin = kelvin_of(temperature)

    def model(x: float) -> float:
        return quasi_static_reading(params, update(state_hint, x), kelvin, diffusion_state, drift_level).picofarads

    c_dry, c_wet = model(0.0), model(1.0)
    if target < c_dry - RANGE_TOLERANCE_PF:
        raise ReadingOutOfRangeError(
            f"reading {target:.6g} pF is below the dry capacitance {c_dry:.6g} pF",
            clamped=RelHumidity(x=0.0),
        )
    if target > c_wet + RANGE_TOLERANCE_PF:
        raise ReadingOutOfRangeError(
            f"reading {target:.6g} pF is above the saturated capacitance {c_wet:.6g} pF",
            clamped=RelHumidity(x=1.0),
        )
    if target <= c_dry:
        return RelHumidity(x=0.0)
    if target >= c_wet:
        return RelHumidity(x=1.0)

    lo, hi = 0.0, 1.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if model(mid) >= target:
            hi = mid
        else:
            lo = mid
    return RelHumidity(x=hi)


def response_curve(
    params: SensorParams,
    temperature: TemperatureLike,
    branch: Branch,
    samples: int = 101,
    diffusion_state: float = 0.0,
) -> ResponseCurve:
    """Quasi-static capacitance along a major-loop branch, x increasing."""
    kelvin = physics_temperature(kelvin_of(temperature))
    dist = params.dist.scaled(widening_factor(diffusion_state, params.thermal))
    curve = branch_curve(dist, params.angles, params.bet, kelvin, Branch(branch), samples)
    points = sorted(
        (x, capacitance(effective_permittivity(fill, params.diel), params.diel).picofarads) for x, fill in curve
    )
    return ResponseCurve(points=tuple(points), branch=Branch(branch))


def average_sensitivity(curve: ResponseCurve, lo: HumidityLike, hi: HumidityLike) -> float:
    """
    Mean slope in pF per %RH between two RH values.

    Raises:
        QuantityRangeError: If lo >= hi or the curve does not cover [lo, hi]
    """
    lo, hi = fraction_of(lo), fraction_of(hi)
    if not lo < hi:
        raise QuantityRangeError(f"sensitivity interval needs lo < hi, got [{lo}, {hi}]")
    return (curve.at(hi) - curve.at(lo)) / (100.0 * (hi - lo))
