import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.hysteresis.filling import FilledFraction
from src.hysteresis.state import Branch
from src.quantities.constants import KAPPA_AIR, KAPPA_WATER
from src.quantities.units import Capacitance
from src.utils.error_handler import ContractViolationError, DegenerateInputError, QuantityRangeError


class DielectricParams(BaseModel):
    """
    Permittivities of the three phases and the cell geometry.

    geometry_factor is C0 in pF per unit relative permittivity; porosity is
    the same void fraction as the pore distribution's.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kappa_solid: float = Field(9.0, ge=1.0)
    kappa_water: float = Field(KAPPA_WATER, ge=1.0)
    kappa_air: float = Field(KAPPA_AIR, ge=1.0)
    geometry_factor: float = Field(130.0, gt=0.0, description="pF")
    porosity: float = Field(0.30, ge=0.0, lt=1.0)


def effective_permittivity(fill: FilledFraction, params: DielectricParams) -> float:
    """
    Lichtenecker log-linear mixture of solid, water and air.

    ln k = (1 - phi) ln k_s + phi w ln k_w + phi (1 - w) ln k_a,
    where w = liquid + film (1 - liquid).
    """
    w = fill.water_fraction
    phi = params.porosity
    log_kappa = (
        (1.0 - phi) * math.log(params.kappa_solid)
        + phi * w * math.log(params.kappa_water)
        + phi * (1.0 - w) * math.log(params.kappa_air)
    )
    return math.exp(log_kappa)


def capacitance(kappa_eff: float, params: DielectricParams) -> Capacitance:
    """C = C0 k_eff."""
    if not kappa_eff >= 1.0:
        raise ContractViolationError(f"effective permittivity must be >= 1, got {kappa_eff}")
    return Capacitance(picofarads=params.geometry_factor * kappa_eff)


def morphology_exponent(c_dry: float, c_wet: float, kappa_dry: float, kappa_wet: float) -> float:
    """
    Exponent n of the power law C_wet / C_dry = (k_wet / k_dry)^n.

    Raises:
        DegenerateInputError: If the two permittivities are equal
    """
    c_dry = c_dry.picofarads if isinstance(c_dry, Capacitance) else float(c_dry)
    c_wet = c_wet.picofarads if isinstance(c_wet, Capacitance) else float(c_wet)
    if min(c_dry, c_wet, kappa_dry, kappa_wet) <= 0:
        raise ContractViolationError("capacitances and permittivities must be positive")
    if kappa_wet == kappa_dry:
        raise DegenerateInputError("equal permittivities leave the exponent undefined")
    return math.log(c_wet / c_dry) / math.log(kappa_wet / kappa_dry)


class ResponseCurve(BaseModel):
    """Capacitance against RH along one branch, x strictly increasing."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[Tuple[float, float], ...]
    branch: Branch = Branch.UNKNOWN

    @model_validator(mode="after")
    def _x_strictly_increasing(self) -> "ResponseCurve":
        xs = [x for x, _ in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("response curve x values must be strictly increasing")
        return self

    @property
    def x(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    @property
    def picofarads(self) -> np.ndarray:
        return np.array([c for _, c in self.points])

    def at(self, x: float) -> float:
        """Capacitance at x by linear interpolation; x must lie inside the curve."""
        xs = self.x
        if xs.size == 0 or x < xs[0] - 1e-12 or x > xs[-1] + 1e-12:
            raise QuantityRangeError(f"x = {x} lies outside the curve coverage")
        return float(np.interp(x, xs, self.picofarads))
