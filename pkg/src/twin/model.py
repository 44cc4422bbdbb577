import math

from src.dielectric.response import capacitance, effective_permittivity
from src.hysteresis.filling import FilledFraction, filled_fraction
from src.hysteresis.state import HysteresisState
from src.quantities.constants import GAS_CONSTANT, WATER_BOILING_K
from src.quantities.units import Capacitance
from src.twin.params import SensorParams, ThermalParams


def physics_temperature(kelvin: float) -> float:
    """Temperature used for sorption physics; liquid-water properties stop at the boiling point."""
    return min(kelvin, WATER_BOILING_K)


def diffusion_equilibrium(x: float, kelvin: float, thermal: ThermalParams) -> float:
    """
    Equilibrium moisture load of the pore walls.

    s* = min(1, x exp(-(E_d / R)(1/T - 1/T_ref))): proportional to RH and
    Arrhenius-activated, saturating at T_ref.
    """
    exponent = -(thermal.widening_activation / GAS_CONSTANT) * (
        1.0 / kelvin - 1.0 / thermal.widening_reference_temp
    )
    return min(1.0, x * math.exp(exponent))


def widening_factor(diffusion_state: float, thermal: ThermalParams) -> float:
    """Factor applied to pore radii for a wall moisture load s: 1 / (1 + alpha s)."""
    return 1.0 / (1.0 + thermal.widening_amplitude * diffusion_state)


def sorbed_fraction(
    params: SensorParams,
    state: HysteresisState,
    kelvin: float,
    diffusion_state: float = 0.0,
) -> FilledFraction:
    """Filled fractions with the pore distribution widened by the wall moisture load."""
    dist = params.dist.scaled(widening_factor(diffusion_state, params.thermal))
    return filled_fraction(state, dist, params.angles, params.bet, physics_temperature(kelvin))


def quasi_static_reading(
    params: SensorParams,
    state: HysteresisState,
    kelvin: float,
    diffusion_state: float = 0.0,
    drift_level: float = 0.0,
) -> Capacitance:
    """
    Capacitance for a settled hysteresis state.

    Args:
        params: Sensor parameters
        state: Hysteresis state whose current RH is read
        kelvin: Element temperature
        diffusion_state: Wall moisture load s in [0, 1]
        drift_level: Chemisorption drift D in [0, 1]

    Returns:
        capacitance(k_eff) + D * max_offset
    """
    fill = sorbed_fraction(params, state, kelvin, diffusion_state)
    reading = capacitance(effective_permittivity(fill, params.diel), params.diel)
    if drift_level == 0.0:
        return reading
    return Capacitance(picofarads=reading.picofarads + drift_level * params.drift.max_offset)
