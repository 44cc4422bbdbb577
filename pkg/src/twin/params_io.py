import logging
from pathlib import Path
from typing import Any, Dict, Union

import tomlkit
from tomlkit.exceptions import TOMLKitError

from src.twin.params import SensorParams, apply_overrides, default_sensor_params
from src.utils.error_handler import ConfigError

logger = logging.getLogger("rh_twin.twin.params_io")


def _flatten(tree: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in tree.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{path}."))
        else:
            flat[path] = value
    return flat


def _as_tables(node: Any) -> Any:
    if isinstance(node, dict):
        return {key: _as_tables(value) for key, value in node.items()}
    if isinstance(node, (list, tuple)):
        return {str(i): _as_tables(value) for i, value in enumerate(node)}
    if isinstance(node, float):
        return float(f"{node:.9g}")
    return node


def dump_params(params: SensorParams) -> str:
    """
    Serialize every parameter as `key = value` lines under dotted section headers.

    List entries become numbered sections such as [dist.modes.0]; floats
    keep 9 significant digits.
    """
    return tomlkit.dumps(_as_tables(params.model_dump()))


def load_params(text: str, base: SensorParams = None) -> SensorParams:
    """
    Parse a parameter file written by dump_params (or any subset of it).

    Keys not present keep their value from base, the defaults when omitted.
    """
    try:
        tree = tomlkit.parse(text).unwrap()
    except TOMLKitError as e:
        raise ConfigError(f"malformed parameter file: {e}") from e
    return apply_overrides(base or default_sensor_params(), _flatten(tree))


def write_params(params: SensorParams, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as file:
        file.write(dump_params(params))
    logger.info(f"Wrote sensor parameters to {path}")


def read_params(path: Union[str, Path], base: SensorParams = None) -> SensorParams:
    with open(path, "r", encoding="utf-8") as file:
        return load_params(file.read(), base)
