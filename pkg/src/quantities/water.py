from pydantic import BaseModel, ConfigDict, Field

from src.quantities.constants import (
    CELSIUS_OFFSET,
    WATER_BOILING_K,
    WATER_FREEZING_K,
    WATER_MOLAR_VOLUME,
)
from src.quantities.units import TemperatureLike, kelvin_of
from src.utils.error_handler import QuantityRangeError, require_finite


class WaterProperties(BaseModel):
    """Liquid water properties entering the Kelvin equation."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    surface_tension: float = Field(..., gt=0.0, description="N/m")
    molar_volume: float = Field(..., gt=0.0, description="m^3/mol")


def water_properties(temperature: TemperatureLike) -> WaterProperties:
    """
    Surface tension and molar volume of liquid water.

    Surface tension follows the linear fit (75.64 - 0.1414 t_C) mN/m;
    molar volume is held at 1.805e-5 m^3/mol.

    Args:
        temperature: Temperature between 273.15 K and 373.15 K

    Returns:
        WaterProperties at that temperature

    Raises:
        QuantityRangeError: If the temperature is outside the valid interval
    """
    kelvin = require_finite("temperature", kelvin_of(temperature))
    if not WATER_FREEZING_K <= kelvin <= WATER_BOILING_K:
        raise QuantityRangeError(
            f"water properties are defined for {WATER_FREEZING_K} K <= T <= {WATER_BOILING_K} K, got {kelvin} K"
        )
    t_c = kelvin - CELSIUS_OFFSET
    return WaterProperties(
        surface_tension=(75.64 - 0.1414 * t_c) * 1e-3,
        molar_volume=WATER_MOLAR_VOLUME,
    )
