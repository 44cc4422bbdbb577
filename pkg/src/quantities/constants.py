"""Physical constants shared by the sorption, dielectric and twin modules."""

from pydantic import BaseModel, ConfigDict

GAS_CONSTANT = 8.314462618  # J/(mol K)
KAPPA_WATER = 80.0
KAPPA_AIR = 1.0
CELSIUS_OFFSET = 273.15

WATER_FREEZING_K = 273.15
WATER_BOILING_K = 373.15
WATER_MOLAR_VOLUME = 1.805e-5  # m^3/mol, held constant over 0-100 C


class Constants(BaseModel):
    """Immutable bundle of the fixed constants, for code that wants them as a value."""

    model_config = ConfigDict(frozen=True)

    gas_constant: float = GAS_CONSTANT
    kappa_water: float = KAPPA_WATER
    kappa_air: float = KAPPA_AIR


CONSTANTS = Constants()
