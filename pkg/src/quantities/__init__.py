"""
Base quantities, physical constants and water properties.

RH is carried as the fraction p/p0 everywhere inside the package; percent
only appears at file and CLI boundaries.
"""

from src.quantities.constants import (
    CELSIUS_OFFSET,
    CONSTANTS,
    GAS_CONSTANT,
    KAPPA_AIR,
    KAPPA_WATER,
    Constants,
)
from src.quantities.units import (
    Capacitance,
    RelHumidity,
    Temperature,
    fraction_of,
    kelvin_of,
)
from src.quantities.water import WaterProperties, water_properties

__all__ = [
    "CELSIUS_OFFSET",
    "CONSTANTS",
    "GAS_CONSTANT",
    "KAPPA_AIR",
    "KAPPA_WATER",
    "Capacitance",
    "Constants",
    "RelHumidity",
    "Temperature",
    "WaterProperties",
    "fraction_of",
    "kelvin_of",
    "water_properties",
]
