import copy
import math
from typing import Any, Dict, Iterable, List, Mapping, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.dielectric.response import DielectricParams
from src.pore_structure.distribution import PoreDistribution, default_alumina_distribution
from src.quantities.constants import CELSIUS_OFFSET
from src.sorption.bet import BetParams
from src.sorption.kelvin import ContactAngles
from src.utils.error_handler import ConfigError, DomainError

HEATER_SEGMENTS = 8
POROSITY_KEYS = ("diel.porosity", "dist.porosity")


class HeaterSegment(BaseModel):
    """One resistive heater segment and its thermal path to ambient."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    resistance: float = Field(100.0, gt=0.0, description="Ohm")
    thermal_resistance: float = Field(200.0, ge=0.0, description="K/W")
    max_power: float = Field(0.05, gt=0.0, description="W")

    def drive_voltage(self, power: float) -> float:
        """Voltage that dissipates the given power in this segment, V = sqrt(P R)."""
        if power < 0:
            raise DomainError(f"power must be non-negative, got {power}")
        return math.sqrt(power * self.resistance)


class ThermalParams(BaseModel):
    """Heater, element thermal lag and moisture-in-walls pore widening."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    widening_amplitude: float = Field(1.0, ge=0.0)
    widening_activation: float = Field(10000.0, ge=0.0, description="J/mol")
    widening_reference_temp: float = Field(373.15, gt=0.0, description="K")
    lag_in: float = Field(30.0, gt=0.0, description="s")
    lag_out: float = Field(60.0, gt=0.0, description="s")
    heaters: Tuple[HeaterSegment, ...] = Field(
        default_factory=lambda: tuple(HeaterSegment() for _ in range(HEATER_SEGMENTS))
    )
    thermal_time_constant: float = Field(2.0, gt=0.0, description="s")

    @field_validator("heaters")
    @classmethod
    def _eight_segments(cls, heaters: Tuple[HeaterSegment, ...]) -> Tuple[HeaterSegment, ...]:
        if len(heaters) != HEATER_SEGMENTS:
            raise ValueError(f"exactly {HEATER_SEGMENTS} heater segments are required, got {len(heaters)}")
        return heaters

    def full_power(self) -> Tuple[float, ...]:
        return tuple(segment.max_power for segment in self.heaters)


class DriftParams(BaseModel):
    """Chemisorption drift and the bake that reverses it."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    rate: float = Field(1e-7, ge=0.0, description="1/s per unit RH")
    max_offset: float = Field(50.0, ge=0.0, description="pF")
    bake_temp_c: float = Field(100.0, description="C")
    bake_time: float = Field(600.0, gt=0.0, description="s")

    @property
    def bake_temp_k(self) -> float:
        return self.bake_temp_c + CELSIUS_OFFSET


class SensorParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    dist: PoreDistribution = Field(default_factory=default_alumina_distribution)
    angles: ContactAngles = Field(default_factory=ContactAngles)
    bet: BetParams = Field(default_factory=BetParams)
    diel: DielectricParams = Field(default_factory=DielectricParams)
    thermal: ThermalParams = Field(default_factory=ThermalParams)
    drift: DriftParams = Field(default_factory=DriftParams)

    @model_validator(mode="after")
    def _shared_porosity(self) -> "SensorParams":
        if abs(self.dist.porosity - self.diel.porosity) > 1e-12:
            raise ValueError(
                f"dist.porosity {self.dist.porosity} and diel.porosity {self.diel.porosity} must agree"
            )
        return self


def default_sensor_params() -> SensorParams:
    return SensorParams()


def _container_child(container: Any, segment: str, path: str):
    if isinstance(container, dict):
        if segment not in container:
            raise ConfigError(f"unknown parameter '{path}'")
        return segment
    if isinstance(container, list):
        try:
            index = int(segment)
        except ValueError:
            raise ConfigError(f"'{segment}' in '{path}' is not a list index") from None
        if not 0 <= index < len(container):
            raise ConfigError(f"index {index} out of range in '{path}'")
        return index
    raise ConfigError(f"unknown parameter '{path}'")


def _listify(tree: Any) -> Any:
    if isinstance(tree, dict):
        return {key: _listify(value) for key, value in tree.items()}
    if isinstance(tree, (list, tuple)):
        return [_listify(value) for value in tree]
    return tree


def get_path(params: SensorParams, path: str) -> Any:
    """Value at a dotted path such as 'dist.modes.1.median_radius'."""
    node: Any = _listify(params.model_dump())
    for segment in path.split("."):
        node = node[_container_child(node, segment, path)]
    return node


def apply_overrides(params: SensorParams, overrides: Mapping[str, Any]) -> SensorParams:
    """
    Return params with dotted-path overrides applied and re-validated.

    Setting either porosity key sets both, since the pore distribution and
    the dielectric mixture share one void fraction.

    Raises:
        ConfigError: For unknown keys or values that fail validation
    """
    if not overrides:
        return params
    tree = _listify(params.model_dump())
    expanded: Dict[str, Any] = {}
    for key, value in overrides.items():
        expanded[key] = value
        if key in POROSITY_KEYS:
            for twin in POROSITY_KEYS:
                if twin not in overrides:
                    expanded[twin] = value

    for key, value in expanded.items():
        segments = key.split(".")
        node = tree
        for segment in segments[:-1]:
            node = node[_container_child(node, segment, key)]
        leaf = _container_child(node, segments[-1], key)
        if isinstance(node[leaf], (dict, list)):
            raise ConfigError(f"'{key}' names a group, not a single parameter")
        node[leaf] = copy.deepcopy(value)

    try:
        return SensorParams.model_validate(tree)
    except ValidationError as e:
        raise ConfigError(f"invalid sensor parameters: {e}") from e


def flatten_params(params: SensorParams) -> Dict[str, Any]:
    """All leaf parameters keyed by dotted path, in declaration order."""
    flat: Dict[str, Any] = {}

    def walk(prefix: List[str], node: Any) -> None:
        if isinstance(node, dict):
            items: Iterable = node.items()
        elif isinstance(node, list):
            items = ((str(i), value) for i, value in enumerate(node))
        else:
            flat[".".join(prefix)] = node
            return
        for key, value in items:
            walk(prefix + [key], value)

    walk([], _listify(params.model_dump()))
    return flat
