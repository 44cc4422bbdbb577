import logging
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.stats import linregress

from src.sorption.bet import bet_linear_point, bet_monolayer_point
from src.utils.error_handler import DataError, NonPhysicalFitError

logger = logging.getLogger("rh_twin.calibration.bet_fit")

Isotherm = Sequence[Tuple[float, float]]


class BetFit(BaseModel):
    """Result of the linear BET fit."""

    model_config = ConfigDict(frozen=True)

    v_m: float
    c: float
    r2: float
    slope: float
    intercept: float
    n_points: int

    @property
    def monolayer_point(self) -> float:
        return bet_monolayer_point(self.c)


def fit_bet(isotherm: Isotherm, x_range: Tuple[float, float] = (0.05, 0.35)) -> BetFit:
    """
    Fit v_m and c from the BET transform y = x / (v (1 - x)).

    The line y = intercept + slope x gives v_m = 1 / (slope + intercept)
    and c = slope / intercept + 1.

    Args:
        isotherm: (x, v) pairs, 0 < x < 1 and v > 0
        x_range: Inclusive x window used for the line

    Returns:
        BetFit with r2 of the transformed line

    Raises:
        DataError: If fewer than three points fall in the window
        NonPhysicalFitError: If the intercept is not positive
    """
    lo, hi = x_range
    selected = [(float(x), float(v)) for x, v in isotherm if lo <= x <= hi]
    if len(selected) < 3:
        raise DataError(f"BET fit needs at least 3 points in [{lo}, {hi}], got {len(selected)}")

    xs = np.array([x for x, _ in selected])
    ys = np.array([bet_linear_point(x, v) for x, v in selected])
    line = linregress(xs, ys)
    slope, intercept = float(line.slope), float(line.intercept)
    if intercept <= 0:
        raise NonPhysicalFitError(f"BET intercept {intercept:.3g} is not positive; c is undefined")

    predicted = intercept + slope * xs
    ss_res = float(np.sum((ys - predicted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    # a flat transform (c = 1) has no variance to explain
    if ss_tot <= 1e-30 * float(np.sum(ys**2)):
        r2 = 1.0 if ss_res <= 1e-30 * float(np.sum(ys**2)) else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot

    fit = BetFit(
        v_m=1.0 / (slope + intercept),
        c=slope / intercept + 1.0,
        r2=r2,
        slope=slope,
        intercept=intercept,
        n_points=len(selected),
    )
    logger.info(f"BET fit on {fit.n_points} points: v_m={fit.v_m:.6g}, c={fit.c:.6g}, r2={fit.r2:.6f}")
    return fit


def detect_type_iv(
    isotherm: Isotherm,
    linear_range: Tuple[float, float] = (0.15, 0.70),
    probe: float = 0.9,
    factor: float = 1.5,
) -> bool:
    """
    Flag the capillary upturn of a type-IV isotherm.

    True when the uptake interpolated at probe exceeds factor times the
    straight line fitted over linear_range and extended to probe. An
    isotherm that does not reach probe, or has fewer than two points in
    the linear range, is not flagged.
    """
    points = sorted((float(x), float(v)) for x, v in isotherm)
    xs = np.array([x for x, _ in points])
    vs = np.array([v for _, v in points])
    in_range = (xs >= linear_range[0]) & (xs <= linear_range[1])
    if in_range.sum() < 2 or xs.size == 0 or xs[0] > probe or xs[-1] < probe:
        logger.warning(f"Isotherm does not cover {linear_range} and x = {probe}; type-IV check skipped")
        return False

    line = linregress(xs[in_range], vs[in_range])
    extrapolated = line.intercept + line.slope * probe
    measured = float(np.interp(probe, xs, vs))
    return bool(measured > factor * extrapolated)
