from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from src.quantities.constants import CELSIUS_OFFSET


class RelHumidity(BaseModel):
    """Relative humidity stored as the vapor-pressure ratio p/p0 in [0, 1]."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x: float = Field(..., ge=0.0, le=1.0, description="p/p0 as a fraction")
    _percent: Optional[float] = PrivateAttr(default=None)

    @classmethod
    def from_percent(cls, percent: float) -> "RelHumidity":
        percent = float(percent)
        rh = cls(x=percent / 100.0)
        rh._percent = percent
        return rh

    @property
    def percent(self) -> float:
        # x * 100 can land one ulp off the percent it came from
        return self._percent if self._percent is not None else self.x * 100.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelHumidity):
            return NotImplemented
        return self.x == other.x

    def __hash__(self) -> int:
        return hash(self.x)


class Temperature(BaseModel):
    """Absolute temperature in kelvin."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kelvin: float = Field(..., gt=0.0)

    @classmethod
    def from_celsius(cls, celsius: float) -> "Temperature":
        return cls(kelvin=float(celsius) + CELSIUS_OFFSET)

    @property
    def celsius(self) -> float:
        return self.kelvin - CELSIUS_OFFSET


class Capacitance(BaseModel):
    """Capacitance in picofarads."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    picofarads: float = Field(..., ge=0.0)


HumidityLike = Union[RelHumidity, float]
TemperatureLike = Union[Temperature, float]


def fraction_of(x: HumidityLike) -> float:
    """Return the p/p0 fraction of a RelHumidity or a bare float."""
    return x.x if isinstance(x, RelHumidity) else float(x)


def kelvin_of(temperature: TemperatureLike) -> float:
    """Return kelvin of a Temperature or a bare float (taken as kelvin)."""
    return temperature.kelvin if isinstance(temperature, Temperature) else float(temperature)
