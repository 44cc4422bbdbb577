import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.quantities.constants import GAS_CONSTANT
from src.quantities.units import HumidityLike, TemperatureLike, fraction_of, kelvin_of
from src.quantities.water import WaterProperties
from src.utils.error_handler import DomainError, require_finite


class ContactAngles(BaseModel):
    """Advancing and receding water contact angles on alumina, in degrees."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    advancing: float = Field(70.0, ge=0.0, lt=90.0)
    receding: float = Field(38.0, ge=0.0, lt=90.0)

    @model_validator(mode="after")
    def _receding_not_above_advancing(self) -> "ContactAngles":
        # equality is the no-hysteresis limit
        if self.receding > self.advancing:
            raise ValueError(
                f"receding angle {self.receding} exceeds advancing angle {self.advancing}"
            )
        return self


def kelvin_length(temperature: TemperatureLike, theta: float, water: WaterProperties) -> float:
    """
    2 gamma V cos(theta) / (R T) in nm.

    Kelvin radius is this length divided by -ln x.
    """
    kelvin = require_finite("temperature", kelvin_of(temperature))
    if kelvin <= 0:
        raise DomainError(f"temperature must be positive, got {kelvin} K")
    if not 0.0 <= theta < 90.0:
        raise DomainError(f"contact angle must lie in [0, 90) degrees, got {theta}")
    metres = 2.0 * water.surface_tension * water.molar_volume * math.cos(math.radians(theta)) / (
        GAS_CONSTANT * kelvin
    )
    return metres * 1e9


def condensation_radius(x: float, length: float) -> float:
    """Kelvin radius for a precomputed kelvin_length; 0 at x <= 0 and inf at x >= 1."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return math.inf
    return length / -math.log(x)


def kelvin_radius(x: HumidityLike, temperature: TemperatureLike, theta: float, water: WaterProperties) -> float:
    """
    Largest pore radius (nm) that holds condensate at relative pressure x.

    Args:
        x: Relative pressure, 0 < x < 1
        temperature: Absolute temperature
        theta: Contact angle in degrees, 0 <= theta < 90
        water: Surface tension and molar volume

    Returns:
        r_K = -2 gamma V cos(theta) / (R T ln x) in nm
    """
    x = require_finite("x", fraction_of(x))
    if not 0.0 < x < 1.0:
        raise DomainError(f"Kelvin radius needs 0 < x < 1, got {x}")
    return condensation_radius(x, kelvin_length(temperature, theta, water))


def inverse_kelvin(r: float, temperature: TemperatureLike, theta: float, water: WaterProperties) -> float:
    """Relative pressure at which a pore of radius r (nm) fills or empties."""
    r = require_finite("r", r)
    if r <= 0:
        raise DomainError(f"pore radius must be positive, got {r}")
    return math.exp(-kelvin_length(temperature, theta, water) / r)
