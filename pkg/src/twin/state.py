from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.hysteresis.state import HysteresisState
from src.quantities.units import RelHumidity, Temperature
from src.twin.params import HEATER_SEGMENTS


class TwinState(BaseModel):
    """Everything the twin carries from one step to the next."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    hysteresis: HysteresisState = Field(default_factory=HysteresisState)
    drift_level: float = Field(0.0, ge=0.0, le=1.0)
    element_temp: float = Field(298.15, gt=0.0, description="K")
    diffusion_state: float = Field(0.0, ge=0.0, le=1.0)
    clock: float = Field(0.0, description="s")

    @classmethod
    def baked(cls, ambient_kelvin: float = 298.15, clock: float = 0.0) -> "TwinState":
        """Freshly baked sensor at ambient temperature: dry pores, no drift."""
        return cls(
            hysteresis=HysteresisState.baked(ambient_kelvin),
            element_temp=ambient_kelvin,
            clock=clock,
        )


class Ambient(BaseModel):
    model_config = ConfigDict(frozen=True)

    rh: RelHumidity
    temperature: Temperature


class EnvironmentRow(BaseModel):
    """One row of an environment trace; powers apply over the interval ending at t."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    t: float = Field(..., description="s")
    rh: RelHumidity
    temperature: Temperature
    heater_powers: Tuple[float, ...] = (0.0,) * HEATER_SEGMENTS

    @property
    def ambient(self) -> Ambient:
        return Ambient(rh=self.rh, temperature=self.temperature)


class TraceReading(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    capacitance_pf: float
