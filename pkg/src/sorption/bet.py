import math

from pydantic import BaseModel, ConfigDict, Field

from src.quantities.constants import GAS_CONSTANT
from src.quantities.units import HumidityLike, TemperatureLike, fraction_of, kelvin_of
from src.utils.error_handler import DomainError, SingularityError, require_finite


class BetParams(BaseModel):
    """
    BET multilayer parameters.

    v_m is the monolayer capacity in amount units; t_mono is the thickness
    of one adsorbed water layer in nm, used when coverage is read as a film.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    v_m: float = Field(1.0, gt=0.0)
    e1_minus_el: float = Field(11400.0, description="J/mol")
    t_mono: float = Field(0.3, gt=0.0, description="nm")


def bet_c(params: BetParams, temperature: TemperatureLike) -> float:
    """c = exp((E1 - EL) / (R T))."""
    kelvin = require_finite("temperature", kelvin_of(temperature))
    if kelvin <= 0:
        raise DomainError(f"temperature must be positive, got {kelvin} K")
    return math.exp(params.e1_minus_el / (GAS_CONSTANT * kelvin))


def bet_coverage(x: HumidityLike, c: float) -> float:
    """
    Adsorbed amount in monolayers, v/v_m = c x / ((1 - x)(1 + (c - 1) x)).

    Raises:
        SingularityError: At x = 1, where the layer count diverges
        DomainError: For x outside [0, 1) or c <= 0
    """
    x = require_finite("x", fraction_of(x))
    if x == 1.0:
        raise SingularityError("BET coverage diverges at p/p0 = 1")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"BET coverage needs 0 <= x < 1, got {x}")
    if not c > 0:
        raise DomainError(f"BET constant c must be positive, got {c}")
    return c * x / ((1.0 - x) * (1.0 + (c - 1.0) * x))


def bet_linear_point(x: HumidityLike, v: float) -> float:
    """BET transform y = x / (v (1 - x)), linear in x for BET data."""
    x = require_finite("x", fraction_of(x))
    if not 0.0 < x < 1.0:
        raise DomainError(f"BET transform needs 0 < x < 1, got {x}")
    if not v > 0:
        raise DomainError(f"adsorbed amount must be positive, got {v}")
    return x / (v * (1.0 - x))


def bet_monolayer_point(c: float) -> float:
    """Relative pressure at which the adsorbed amount equals one monolayer."""
    if not c > 0:
        raise DomainError(f"BET constant c must be positive, got {c}")
    return 1.0 / (1.0 + math.sqrt(c))
