import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.calibration.sensor_fit import DEFAULT_FREE
from src.twin.params import SensorParams, apply_overrides, default_sensor_params
from src.twin.params_io import read_params
from src.utils.error_handler import ConfigError

logger = logging.getLogger("rh_twin.cli.config")

DEFAULT_CONFIG_PATH = "config/settings.yaml"


class AppInfo(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "Alumina RH Sensor Twin"
    version: str = "0.1.0"


class LoopOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    samples: int = Field(101, ge=2)


class CalibrationOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    free: List[str] = Field(default_factory=lambda: list(DEFAULT_FREE))
    bet_range: Tuple[float, float] = (0.05, 0.35)
    sensitivity_range: Tuple[float, float] = (0.20, 0.90)


class MaintenanceOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bake_interval_h: float = Field(24.0, gt=0.0)
    warmup_s: float = Field(60.0, ge=0.0)


class RunConfig(BaseModel):
    """Run options plus flat dotted sensor-parameter overrides."""

    model_config = ConfigDict(extra="forbid")

    app: AppInfo = Field(default_factory=AppInfo)
    ambient_c: float = 25.0
    log_level: Optional[str] = None
    loop: LoopOptions = Field(default_factory=LoopOptions)
    calibration: CalibrationOptions = Field(default_factory=CalibrationOptions)
    maintenance: MaintenanceOptions = Field(default_factory=MaintenanceOptions)
    optimizer: Dict[str, float] = Field(default_factory=dict)
    sensor: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, overrides: Sequence[str] = ()) -> "RunConfig":
        """
        Build the run configuration.

        Precedence: --set values > config file > built-in defaults. Without
        an explicit path, config/settings.yaml is used when it exists.

        Raises:
            ConfigError: For unreadable files, unknown keys or bad values
        """
        data: Dict[str, Any] = {}
        source = path if path is not None else (DEFAULT_CONFIG_PATH if os.path.exists(DEFAULT_CONFIG_PATH) else None)
        if source is not None:
            try:
                with open(source, "r", encoding="utf-8") as file:
                    data = yaml.safe_load(file) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigError(f"cannot read config {source}: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError(f"config {source} must be a mapping")
            logger.debug(f"Loaded run configuration from {source}")

        data = dict(data)
        data["sensor"] = dict(data.get("sensor") or {})
        for key, value in parse_set_options(overrides).items():
            head = key.split(".")[0]
            if head in cls.model_fields and head != "sensor":
                _assign(data, key.split("."), value)
            else:
                data["sensor"][key.removeprefix("sensor.")] = value

        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def sensor_params(self, params_file: Optional[Union[str, Path]] = None) -> SensorParams:
        """Defaults, then the parameter file, then the sensor overrides."""
        base = default_sensor_params()
        if params_file is not None:
            try:
                base = read_params(params_file, base)
            except OSError as e:
                raise ConfigError(f"cannot read parameter file {params_file}: {e}") from e
        return apply_overrides(base, self.sensor)


def parse_set_options(options: Sequence[str]) -> Dict[str, Any]:
    """Parse repeated `key=value` strings; values are read as YAML scalars."""
    parsed: Dict[str, Any] = {}
    for option in options:
        key, sep, raw = option.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got '{option}'")
        try:
            parsed[key] = yaml.safe_load(raw) if raw.strip() else ""
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse value for '{key}': {e}") from e
    return parsed


def _assign(tree: Dict[str, Any], path: List[str], value: Any) -> None:
    node = tree
    for segment in path[:-1]:
        child = node.get(segment)
        if not isinstance(child, dict):
            child = {} if child is None else child
            if not isinstance(child, dict):
                raise ConfigError(f"'{'.'.join(path)}' does not name a setting")
            node[segment] = child
        node = child
    node[path[-1]] = value
