import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.hysteresis.state import Branch, HysteresisState, update
from src.pore_structure.distribution import PoreDistribution, upper_partial_moment, volume_cdf
from src.quantities.units import TemperatureLike, kelvin_of
from src.quantities.water import water_properties
from src.sorption.bet import BetParams, bet_c, bet_coverage
from src.sorption.kelvin import ContactAngles, condensation_radius, kelvin_length
from src.utils.error_handler import DomainError

logger = logging.getLogger("rh_twin.hysteresis.filling")

Interval = Tuple[float, float]


class FilledFraction(BaseModel):
    """Pore volume held as capillary condensate, and the film share of the rest."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    liquid: float = Field(..., ge=0.0, le=1.0)
    film: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _total_at_most_one(self) -> "FilledFraction":
        if self.water_fraction > 1.0 + 1e-12:
            raise ValueError("liquid plus film exceeds the pore volume")
        return self

    @property
    def water_fraction(self) -> float:
        """w = liquid + film (1 - liquid)."""
        return self.liquid + self.film * (1.0 - self.liquid)


def _union(intervals: List[Interval], new: Interval) -> List[Interval]:
    merged: List[Interval] = []
    for lo, hi in sorted(intervals + [new]):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def _cut_above(intervals: List[Interval], cap: float) -> List[Interval]:
    return [(lo, min(hi, cap)) for lo, hi in intervals if lo < cap]


def filled_intervals(memory: Sequence[float], fill_length: float, empty_length: float) -> List[Interval]:
    """
    Radius intervals (nm) holding condensate after the given memory.

    A pore of radius r fills once RH reaches exp(-fill_length / r) and
    empties once RH drops to exp(-empty_length / r). Every stored maximum
    fills all pores up to its advancing Kelvin radius; every later minimum
    empties those above its receding Kelvin radius.
    """
    intervals: List[Interval] = []
    for i, value in enumerate(memory):
        if i % 2 == 0:
            intervals = _union(intervals, (0.0, condensation_radius(value, fill_length)))
        else:
            intervals = _cut_above(intervals, condensation_radius(value, empty_length))
    return [(lo, hi) for lo, hi in intervals if hi > lo]


def film_thickness(x: float, bet: BetParams, c: float) -> float:
    """Adsorbed film thickness in nm; unbounded at saturation."""
    if x >= 1.0:
        return math.inf
    return bet.t_mono * bet_coverage(x, c)


def _film_above(dist: PoreDistribution, rho: float, t: float) -> float:
    """
    Film volume in pores wider than rho, as a fraction of total pore volume.

    A cylinder of radius r with a wall film of thickness t is covered over
    the annulus share 1 - (1 - t/r)^2, and completely when r <= t.
    """
    if math.isinf(t):
        return 1.0 - volume_cdf(dist, rho)
    knee = max(rho, t)
    full = volume_cdf(dist, knee) - volume_cdf(dist, rho)
    if t == 0.0:
        return full
    partial = 2.0 * t * upper_partial_moment(dist, knee, -1.0) - t * t * upper_partial_moment(dist, knee, -2.0)
    return full + partial


def filled_fraction(
    state: HysteresisState,
    dist: PoreDistribution,
    angles: ContactAngles,
    bet: BetParams,
    temperature: TemperatureLike,
) -> FilledFraction:
    """
    Condensate and film fractions for a pore population after a history.

    Args:
        state: Reduced RH history
        dist: Pore-radius distribution
        angles: Advancing and receding contact angles
        bet: Film parameters
        temperature: Temperature at which thresholds are evaluated

    Returns:
        FilledFraction for the current RH of the state
    """
    kelvin = kelvin_of(temperature)
    water = water_properties(kelvin)
    fill_length = kelvin_length(kelvin, angles.advancing, water)
    empty_length = kelvin_length(kelvin, angles.receding, water)

    intervals = filled_intervals(state.memory, fill_length, empty_length)
    liquid = sum(volume_cdf(dist, hi) - volume_cdf(dist, lo) for lo, hi in intervals)
    liquid = min(max(liquid, 0.0), 1.0)

    x = state.current
    if liquid >= 1.0 or x == 0.0:
        return FilledFraction(liquid=liquid, film=0.0)

    t = film_thickness(x, bet, bet_c(bet, kelvin))
    film_volume = _film_above(dist, 0.0, t)
    for lo, hi in intervals:
        film_volume -= _film_above(dist, lo, t) - _film_above(dist, hi, t)
    film = min(max(film_volume / (1.0 - liquid), 0.0), 1.0)
    return FilledFraction(liquid=liquid, film=film)


def branch_curve(
    dist: PoreDistribution,
    angles: ContactAngles,
    bet: BetParams,
    temperature: TemperatureLike,
    direction: Branch,
    samples: int,
) -> List[Tuple[float, FilledFraction]]:
    """
    Filled fractions along one major-loop branch.

    Ascending sweeps 0 -> 1 from the baked state; descending sweeps
    1 -> 0 from saturation. Points are returned in sweep order.
    """
    if samples < 2:
        raise DomainError(f"a branch needs at least 2 samples, got {samples}")
    direction = Branch(direction)
    if direction is Branch.UNKNOWN:
        raise DomainError("branch_curve needs an ascending or descending direction")

    grid = np.linspace(0.0, 1.0, samples)
    if direction is Branch.DESCENDING:
        grid = grid[::-1]
    state = HysteresisState.for_branch(direction, kelvin_of(temperature))
    curve = []
    for x in grid:
        state = update(state, float(x))
        curve.append((float(x), filled_fraction(state, dist, angles, bet, temperature)))
    return curve


def loop_area(ascending: Sequence[Tuple[float, float]], descending: Sequence[Tuple[float, float]]) -> float:
    """
    Area between two branches by the trapezoid rule over x.

    Both branches are (x, value) pairs on the same grid, in any order; the
    result is integral(descending - ascending) dx.
    """
    asc = sorted(ascending)
    desc = sorted(descending)
    xs = np.array([x for x, _ in asc])
    if xs.size != len(desc) or not np.allclose(xs, [x for x, _ in desc], rtol=0.0, atol=1e-12):
        raise DomainError("branches must share the same x grid")
    gap = np.array([d for _, d in desc]) - np.array([a for _, a in asc])
    return float(np.sum(0.5 * (gap[1:] + gap[:-1]) * np.diff(xs)))
