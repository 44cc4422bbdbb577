import logging
import math
import re
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.calibration.dataset import CalibrationDataset, CalibrationPoint
from src.calibration.engine import FitProblem, FitReport, least_squares
from src.hysteresis.state import Branch, HysteresisState, update
from src.twin.model import quasi_static_reading
from src.twin.params import SensorParams, apply_overrides, get_path
from src.utils.error_handler import ConfigError, ConvergenceError, DataError

logger = logging.getLogger("rh_twin.calibration.sensor_fit")

DEFAULT_FREE = (
    "diel.geometry_factor",
    "diel.porosity",
    "diel.kappa_solid",
    "bet.e1_minus_el",
    "dist.modes.0.median_radius",
    "dist.modes.1.median_radius",
    "angles.advancing",
    "angles.receding",
)
FIXED_POINT_MASK = ("diel.geometry_factor", "diel.porosity", "bet.e1_minus_el")
UNLABELLED_RH_LIMIT = 0.5

RECEDING = "angles.receding"
ADVANCING = "angles.advancing"
ANGLE_GAP_BOUNDS = (-20.0, math.log(89.0))

_BOUNDS = [
    (r"diel\.geometry_factor", (1e-6, np.inf)),
    (r"diel\.porosity", (1e-3, 0.95)),
    (r"diel\.kappa_solid", (1.0, 100.0)),
    (r"bet\.e1_minus_el", (-5e4, 1e5)),
    (r"bet\.t_mono", (1e-3, 5.0)),
    (r"dist\.modes\.\d+\.median_radius", (1e-3, 1e3)),
    (r"dist\.modes\.\d+\.sigma_log", (1e-3, 3.0)),
    (r"angles\.advancing", (0.0, 89.0)),
    (r"angles\.receding", ANGLE_GAP_BOUNDS),
]


def parameter_bounds(name: str) -> Tuple[float, float]:
    """Box bounds of a free parameter; receding is bounded in its log-gap form."""
    for pattern, bounds in _BOUNDS:
        if re.fullmatch(pattern, name):
            return bounds
    raise ConfigError(f"'{name}' cannot be calibrated from capacitance data")


class ParameterVector:
    """
    Maps a free-parameter mask to a flat vector and back.

    The receding angle travels as delta with theta_R = theta_A - exp(delta),
    which keeps theta_R below theta_A without a penalty.
    """

    def __init__(self, init: SensorParams, free: Sequence[str]):
        names = list(dict.fromkeys(free))
        if not names:
            raise ConfigError("the free-parameter mask is empty")
        self.init = init
        self.names = tuple(names)
        lower, upper, x0 = [], [], []
        for name in self.names:
            lo, hi = parameter_bounds(name)
            get_path(init, name)
            if name == ADVANCING and RECEDING not in self.names:
                lo = max(lo, init.angles.receding)
            lower.append(lo)
            upper.append(hi)
            x0.append(self._encode(name, init))
        self.lower = np.array(lower)
        self.upper = np.array(upper)
        self.x0 = np.clip(np.array(x0), self.lower, self.upper)

    @staticmethod
    def _encode(name: str, params: SensorParams) -> float:
        if name == RECEDING:
            gap = params.angles.advancing - params.angles.receding
            return math.log(gap) if gap > 0 else ANGLE_GAP_BOUNDS[0]
        return float(get_path(params, name))

    def decode(self, vector: np.ndarray) -> SensorParams:
        values: Dict[str, float] = dict(zip(self.names, (float(v) for v in vector)))
        if RECEDING in values:
            advancing = values.get(ADVANCING, self.init.angles.advancing)
            values[RECEDING] = max(0.0, advancing - math.exp(values[RECEDING]))
        return apply_overrides(self.init, values)

    def public_values(self, vector: np.ndarray) -> np.ndarray:
        """Vector with the receding angle reported in degrees."""
        params = self.decode(vector)
        return np.array([float(get_path(params, name)) for name in self.names])


def model_reading(params: SensorParams, point: CalibrationPoint) -> float:
    """Quasi-static reading for a calibration point on its labelled branch."""
    kelvin = point.temperature.kelvin
    x = point.rh.x
    if point.branch is Branch.UNKNOWN:
        readings = [
            quasi_static_reading(params, update(HysteresisState.for_branch(b, kelvin), x), kelvin).picofarads
            for b in (Branch.ASCENDING, Branch.DESCENDING)
        ]
        return 0.5 * (readings[0] + readings[1])
    state = update(HysteresisState.for_branch(point.branch, kelvin), x)
    return quasi_static_reading(params, state, kelvin).picofarads


def _reduce_mask(data: CalibrationDataset, free: Sequence[str], warnings: List[str]) -> Tuple[str, ...]:
    free = tuple(dict.fromkeys(free))
    if data.labelled:
        return free
    kept = tuple(name for name in free if name in FIXED_POINT_MASK)
    dropped = [name for name in free if name not in FIXED_POINT_MASK]
    if dropped:
        message = (
            f"contact angles and pore geometry are unidentifiable from {len(data)} unlabelled points; "
            f"fitting {', '.join(kept) or 'nothing'} and holding {', '.join(dropped)} fixed"
        )
        logger.warning(message)
        warnings.append(message)
    return kept


def calibrate_sensor(
    data: CalibrationDataset,
    init: SensorParams,
    free: Sequence[str] = DEFAULT_FREE,
    optimizer: Optional[Mapping[str, Any]] = None,
) -> Tuple[SensorParams, FitReport]:
    """
    Fit sensor parameters to measured capacitances.

    Residuals are model reading minus measured capacitance; unlabelled
    points are read as the mean of both branches, which is only allowed
    up to 50% RH. A dataset without any branch label is fitted on the
    fixed-point mask (C0, porosity, E1 - EL) with a warning.

    Args:
        data: Calibration points
        init: Starting parameters; everything outside the mask stays fixed
        free: Dotted names of the free parameters
        optimizer: Optional solver setting overrides

    Returns:
        (fitted parameters, report); report.params are in public units

    Raises:
        DataError: For unlabelled points above 50% RH or too few points
        ConfigError: For an empty or uncalibratable mask
        ConvergenceError: If the solver gives up; best_params holds the
            decoded SensorParams and report the public-unit report
    """
    offending = [i + 1 for i, p in enumerate(data.points) if p.branch is Branch.UNKNOWN and p.rh.x > UNLABELLED_RH_LIMIT]
    if offending:
        raise DataError(f"points above 50% RH need a branch label; unlabelled rows: {offending}")

    warnings: List[str] = []
    mask = _reduce_mask(data, free, warnings)
    vector = ParameterVector(init, mask)
    if len(data) < len(vector.names):
        raise DataError(f"{len(data)} points cannot determine {len(vector.names)} free parameters")

    measured = np.array([p.capacitance.picofarads for p in data.points])

    def residuals(theta: np.ndarray) -> np.ndarray:
        params = vector.decode(theta)
        return np.array([model_reading(params, p) for p in data.points]) - measured

    logger.info(f"Calibrating {', '.join(vector.names)} against {len(data)} points")
    problem = FitProblem(residuals, vector.x0, vector.lower, vector.upper, names=vector.names)
    try:
        report = least_squares(problem, **dict(optimizer or {}))
    except ConvergenceError as e:
        best = e.best_params if e.best_params is not None else vector.x0
        raise ConvergenceError(
            e.detail, best_params=vector.decode(best), report=_public_report(e.report, vector, warnings)
        ) from e

    return vector.decode(report.params), _public_report(report, vector, warnings)


def _public_report(report: Optional[FitReport], vector: ParameterVector, warnings: List[str]) -> Optional[FitReport]:
    if report is None:
        return None
    return report.model_copy(
        update={"params": vector.public_values(report.params), "warnings": warnings + report.warnings}
    )
