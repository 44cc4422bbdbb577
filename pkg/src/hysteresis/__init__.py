"""Independent-pore capillary hysteresis: history memory and filled pore volume."""

from src.hysteresis.filling import (
    FilledFraction,
    branch_curve,
    filled_fraction,
    filled_intervals,
    film_thickness,
    loop_area,
)
from src.hysteresis.state import Branch, HysteresisState, replay, update

__all__ = [
    "Branch",
    "FilledFraction",
    "HysteresisState",
    "branch_curve",
    "filled_fraction",
    "filled_intervals",
    "film_thickness",
    "loop_area",
    "replay",
    "update",
]
