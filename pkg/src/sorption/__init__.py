"""BET multilayer adsorption and Kelvin capillary condensation."""

from src.sorption.bet import BetParams, bet_c, bet_coverage, bet_linear_point, bet_monolayer_point
from src.sorption.kelvin import (
    ContactAngles,
    condensation_radius,
    inverse_kelvin,
    kelvin_length,
    kelvin_radius,
)

__all__ = [
    "BetParams",
    "ContactAngles",
    "bet_c",
    "bet_coverage",
    "bet_linear_point",
    "bet_monolayer_point",
    "condensation_radius",
    "inverse_kelvin",
    "kelvin_length",
    "kelvin_radius",
]
