import logging
import math
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.calibration.engine import FitProblem, FitReport, least_squares
from src.utils.error_handler import BoundaryFitError, ConvergenceError, DataError, DomainError

logger = logging.getLogger("rh_twin.pore_structure.scattering")

MIN_FIT_POINTS = 5
DEFAULT_RADIUS_ANGSTROM = 10.0
# r q_max below this leaves the Lorentzian shoulder outside the measured range
RESOLVED_RQ = 1e-3


class ScatteringPoint(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    q: float = Field(..., gt=0.0, description="1/Angstrom")
    intensity: float = Field(..., ge=0.0)


class ScatteringCurve(BaseModel):
    """Background-subtracted, isotropic scattering intensity I(q)."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[ScatteringPoint, ...]

    @model_validator(mode="after")
    def _q_strictly_increasing(self) -> "ScatteringCurve":
        qs = [p.q for p in self.points]
        for i in range(1, len(qs)):
            if qs[i] <= qs[i - 1]:
                raise ValueError(f"q must be strictly increasing (point {i + 1})")
        return self

    @classmethod
    def from_arrays(cls, q, intensity) -> "ScatteringCurve":
        return cls(points=tuple(ScatteringPoint(q=a, intensity=b) for a, b in zip(q, intensity)))

    @property
    def q(self) -> np.ndarray:
        return np.array([p.q for p in self.points])

    @property
    def intensity(self) -> np.ndarray:
        return np.array([p.intensity for p in self.points])


class LorentzianParams(BaseModel):
    """I(0) and mean pore radius r in Angstrom."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    i0: float = Field(..., gt=0.0)
    r: float = Field(..., gt=0.0, description="Angstrom")

    @property
    def width_nm(self) -> float:
        """Pore width 2r in nm."""
        return 2.0 * self.r / 10.0


def lorentzian_intensity(params: LorentzianParams, q: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """I(q) = I(0) / (1 + r^2 q^2)."""
    q_arr = np.asarray(q, dtype=float)
    if np.any(q_arr < 0):
        raise DomainError("scattering vector q must be non-negative")
    result = params.i0 / (1.0 + (params.r * q_arr) ** 2)
    return float(result) if np.ndim(result) == 0 else result


def lorentzian_jacobian(i0: float, r: float, q: np.ndarray) -> np.ndarray:
    """Analytic derivatives of I(q) with respect to (i0, r), shape (len(q), 2)."""
    q = np.asarray(q, dtype=float)
    denom = 1.0 + (r * q) ** 2
    d_i0 = 1.0 / denom
    d_r = -2.0 * i0 * r * q**2 / denom**2
    return np.column_stack([d_i0, d_r])


def estimate_lorentzian_init(curve: ScatteringCurve) -> LorentzianParams:
    """
    Initial guess from the curve shape.

    I(0) is taken from the first point; r from the q where the intensity
    first drops to half of it (r = 1/q there). Falls back to 10 Angstrom
    when the curve never halves.
    """
    if not curve.points:
        raise DataError("empty scattering curve")
    q, intensity = curve.q, curve.intensity
    i0 = float(intensity[0])
    if i0 <= 0:
        i0 = float(intensity.max()) or 1.0
    below = np.nonzero(intensity <= 0.5 * i0)[0]
    r = 1.0 / q[below[0]] if below.size else DEFAULT_RADIUS_ANGSTROM
    return LorentzianParams(i0=i0, r=float(r))


def fit_lorentzian(curve: ScatteringCurve, init: LorentzianParams) -> FitReport:
    """
    Least-squares fit of I(q) = I(0) / (1 + r^2 q^2).

    The solver works in (ln I(0), ln r), which keeps both positive without
    a bound they could be clamped onto. ln r is floored a decade below the
    smallest radius the q range resolves.

    Args:
        curve: Scattering curve with at least five points
        init: Strictly positive starting guess

    Returns:
        FitReport with params = [i0, r] and their covariance

    Raises:
        DataError: If the curve has fewer than five points
        BoundaryFitError: If the radius collapses below what the q range resolves
        ConvergenceError: If the iteration cap is hit
    """
    if len(curve.points) < MIN_FIT_POINTS:
        raise DataError(f"fitting needs at least {MIN_FIT_POINTS} points, got {len(curve.points)}")

    q, intensity = curve.q, curve.intensity
    q_max = float(q[-1])
    log_r_floor = math.log(0.1 * RESOLVED_RQ / q_max)

    def residuals(theta: np.ndarray) -> np.ndarray:
        # trial steps far out overflow to inf; the solver rejects non-finite residuals
        with np.errstate(over="ignore", invalid="ignore"):
            i0, r = np.exp(theta)
            return i0 / (1.0 + (r * q) ** 2) - intensity

    problem = FitProblem(
        residuals=residuals,
        x0=[math.log(init.i0), max(math.log(init.r), log_r_floor)],
        lower=[-np.inf, log_r_floor],
        upper=[np.inf, np.inf],
        scale=[1.0, 1.0],
        names=("i0", "r"),
    )
    logger.info(f"Fitting Lorentzian to {q.size} points, start i0={init.i0:.6g}, r={init.r:.6g}")
    try:
        report = _to_linear(least_squares(problem))
    except ConvergenceError as e:
        best = np.exp(e.best_params)
        if best[1] * q_max < RESOLVED_RQ:
            raise BoundaryFitError(
                f"fitted radius {best[1]:.3g} Angstrom is not resolved by q <= {q_max:.3g} 1/Angstrom",
                best_params=best,
            ) from e
        raise

    i0, r = report.params
    if r * q_max < RESOLVED_RQ:
        raise BoundaryFitError(
            f"fitted radius {r:.3g} Angstrom is not resolved by q <= {q_max:.3g} 1/Angstrom",
            best_params=report.params,
            report=report,
        )
    if not report.converged:
        raise ConvergenceError(report.message, best_params=report.params, report=report)
    return report


def _to_linear(report: FitReport) -> FitReport:
    """Map a report over (ln i0, ln r) back to (i0, r)."""
    params = np.exp(report.params)
    jac = np.diag(params)
    return report.model_copy(update={"params": params, "covariance": jac @ report.covariance @ jac})
