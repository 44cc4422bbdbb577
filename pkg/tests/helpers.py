"""Shared fixtures: a per-pore boolean simulator and synthetic calibration data."""

import numpy as np

from src.calibration.dataset import CalibrationDataset, CalibrationPoint
from src.calibration.sensor_fit import model_reading
from src.hysteresis.state import Branch
from src.pore_structure.distribution import volume_cdf
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.quantities.water import water_properties
from src.sorption.kelvin import kelvin_length


class PoreGrid:
    """
    Explicit population of independent pores on a log-radius grid.

    Each cell carries the exact volume weight of the distribution between
    its edges and switches on or off at the Kelvin thresholds of its
    centre radius.
    """

    def __init__(self, dist, angles, kelvin, cells=10_000, r_min=0.02, r_max=500.0):
        edges = np.geomspace(r_min, r_max, cells + 1)
        self.radii = np.sqrt(edges[:-1] * edges[1:])
        self.weights = np.diff(volume_cdf(dist, edges))
        self.max_weight = float(self.weights.max())
        water = water_properties(kelvin)
        self.x_fill = np.exp(-kelvin_length(kelvin, angles.advancing, water) / self.radii)
        self.x_empty = np.exp(-kelvin_length(kelvin, angles.receding, water) / self.radii)
        self.filled = np.zeros(cells, dtype=bool)

    def apply(self, x: float) -> None:
        self.filled |= x >= self.x_fill
        self.filled &= ~(x < self.x_empty)

    @property
    def liquid(self) -> float:
        return float(self.weights[self.filled].sum())


def synthetic_dataset(params, rh_values=None, temp_c=25.0):
    """Noise-free readings on both labelled branches."""
    if rh_values is None:
        rh_values = np.linspace(0.05, 0.95, 13)
    points = []
    for branch in (Branch.ASCENDING, Branch.DESCENDING):
        for x in rh_values:
            point = CalibrationPoint(
                rh=RelHumidity(x=float(x)),
                capacitance=Capacitance(picofarads=0.0),
                branch=branch,
                temperature=Temperature.from_celsius(temp_c),
            )
            reading = model_reading(params, point)
            points.append(point.model_copy(update={"capacitance": Capacitance(picofarads=reading)}))
    return CalibrationDataset(points=tuple(points))
