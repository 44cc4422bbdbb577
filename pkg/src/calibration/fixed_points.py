import logging
from pathlib import Path
from typing import Any, Mapping, Union

import tomlkit
from tomlkit.exceptions import TOMLKitError

from src.calibration.dataset import CalibrationDataset, CalibrationPoint, DatasetMetadata
from src.hysteresis.state import Branch
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.utils.error_handler import ConfigError

logger = logging.getLogger("rh_twin.calibration.fixed_points")

SALT_TEMPERATURE_C = 25.0


def parse_salt_table(text: str) -> dict:
    """Parse a `[salt.<name>]` TOML table into plain dicts."""
    try:
        return tomlkit.parse(text).unwrap()
    except TOMLKitError as e:
        raise ConfigError(f"malformed salt table: {e}") from e


def read_salt_table(path: Union[str, Path]) -> dict:
    with open(path, "r", encoding="utf-8") as file:
        return parse_salt_table(file.read())


def _number(salt: str, entry: Mapping[str, Any], key: str) -> float:
    if key not in entry:
        raise ConfigError(f"salt '{salt}' is missing '{key}'")
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"salt '{salt}': '{key}' must be a number, got {value!r}")
    return float(value)


def load_fixed_points(table: Mapping[str, Any], source: str = "") -> CalibrationDataset:
    """
    Saturated-salt fixed points as an unlabelled 25 C dataset.

    Args:
        table: Parsed salt table, {"salt": {name: {rh_percent, capacitance_pf}}}
        source: Free-form provenance stored in the metadata

    Returns:
        CalibrationDataset with branch unknown for every point

    Raises:
        ConfigError: For duplicate salt names, RH outside (0, 100) or malformed entries
    """
    unknown = set(table) - {"salt"}
    if unknown:
        raise ConfigError(f"unknown salt table sections: {sorted(unknown)}")

    salts = table.get("salt", {}) or {}
    if not isinstance(salts, Mapping):
        raise ConfigError("'salt' must hold one [salt.<name>] table per salt")
    seen = {}
    points = []
    for name, entry in salts.items():
        key = name.strip().lower()
        if key in seen:
            raise ConfigError(f"duplicate salt '{name}' (also listed as '{seen[key]}')")
        seen[key] = name
        if not isinstance(entry, Mapping):
            raise ConfigError(f"salt '{name}' must be a table")
        rh_percent = _number(name, entry, "rh_percent")
        if not 0.0 < rh_percent < 100.0:
            raise ConfigError(f"salt '{name}': rh_percent {rh_percent} outside (0, 100)")
        capacitance_pf = _number(name, entry, "capacitance_pf")
        if capacitance_pf < 0:
            raise ConfigError(f"salt '{name}': capacitance_pf must be non-negative")
        points.append(
            CalibrationPoint(
                rh=RelHumidity.from_percent(rh_percent),
                capacitance=Capacitance(picofarads=capacitance_pf),
                branch=Branch.UNKNOWN,
                temperature=Temperature.from_celsius(SALT_TEMPERATURE_C),
            )
        )

    logger.info(f"Loaded {len(points)} salt fixed points")
    return CalibrationDataset(points=tuple(points), metadata=DatasetMetadata(source=source))
