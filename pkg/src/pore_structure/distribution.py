import math
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import ndtr

from src.utils.error_handler import DomainError

ArrayLike = Union[float, np.ndarray]

MICROPORE_LIMIT_NM = 2.0
MACROPORE_LIMIT_NM = 50.0


class PoreMode(BaseModel):
    """One log-normal population of pore radii, weighted by pore volume."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    weight: float = Field(..., gt=0.0, le=1.0)
    median_radius: float = Field(..., gt=0.0, description="nm")
    sigma_log: float = Field(..., gt=0.0)


class PoreDistribution(BaseModel):
    """Volume-weighted log-normal mixture of pore radii plus total porosity."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    modes: Tuple[PoreMode, ...] = Field(..., min_length=1)
    porosity: float = Field(..., gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _weights_sum_to_one(self) -> "PoreDistribution":
        total = math.fsum(mode.weight for mode in self.modes)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mode weights must sum to 1, got {total!r}")
        return self

    def scaled(self, factor: float) -> "PoreDistribution":
        """Return the distribution with every median radius multiplied by factor."""
        if factor == 1.0:
            return self
        modes = tuple(
            mode.model_copy(update={"median_radius": mode.median_radius * factor})
            for mode in self.modes
        )
        return self.model_copy(update={"modes": modes})

    def _arrays(self):
        weights = np.array([mode.weight for mode in self.modes])
        mu = np.log([mode.median_radius for mode in self.modes])
        sigma = np.array([mode.sigma_log for mode in self.modes])
        return weights, mu, sigma


def default_alumina_distribution() -> PoreDistribution:
    """
    Bimodal anodic-alumina distribution.

    Micropores of 0.86 nm radius (1.7 nm width from scattering) and
    mesopores of 4.5 nm radius (9 nm width from SEM), equal volume weights,
    sigma_log 0.25 and porosity 0.30.
    """
    return PoreDistribution(
        modes=(
            PoreMode(weight=0.5, median_radius=0.86, sigma_log=0.25),
            PoreMode(weight=0.5, median_radius=4.5, sigma_log=0.25),
        ),
        porosity=0.30,
    )


def _log_radius(r: ArrayLike) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("pore radius must be non-negative")
    with np.errstate(divide="ignore"):
        return np.log(r)


def volume_cdf(dist: PoreDistribution, r: ArrayLike) -> ArrayLike:
    """
    Fraction of pore volume in pores with radius <= r.

    Args:
        dist: Pore distribution
        r: Radius in nm (scalar or array), r >= 0; +inf is allowed

    Returns:
        Cumulative volume fraction in [0, 1], same shape as r
    """
    weights, mu, sigma = dist._arrays()
    log_r = _log_radius(r)
    z = (log_r[..., None] - mu) / sigma
    result = np.sum(weights * ndtr(z), axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def volume_pdf(dist: PoreDistribution, r: ArrayLike) -> ArrayLike:
    """Pore-volume density per nm of radius."""
    weights, mu, sigma = dist._arrays()
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (np.log(r)[..., None] - mu) / sigma
        density = weights * np.exp(-0.5 * z**2) / (r[..., None] * sigma * math.sqrt(2.0 * math.pi))
    result = np.nan_to_num(np.sum(density, axis=-1))
    return float(result) if np.ndim(result) == 0 else result


def upper_partial_moment(dist: PoreDistribution, rho: float, k: float) -> float:
    """
    Volume-weighted partial moment sum_i w_i E_i[r^k ; r > rho].

    Uses the log-normal identity
    E[r^k ; r > rho] = exp(k mu + k^2 sigma^2 / 2) * Phi((mu + k sigma^2 - ln rho) / sigma).
    """
    weights, mu, sigma = dist._arrays()
    log_rho = float(_log_radius(rho))
    z = (mu + k * sigma**2 - log_rho) / sigma
    return float(np.sum(weights * np.exp(k * mu + 0.5 * k**2 * sigma**2) * ndtr(z)))


def classify_pore_width(width_nm: float) -> str:
    """IUPAC class of a pore of the given width: micro < 2 nm <= meso <= 50 nm < macro."""
    if width_nm < MICROPORE_LIMIT_NM:
        return "microporous"
    if width_nm <= MACROPORE_LIMIT_NM:
        return "mesoporous"
    return "macroporous"
