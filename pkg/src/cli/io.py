import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd
from pydantic import ValidationError

from src.calibration.dataset import CalibrationDataset, CalibrationPoint
from src.hysteresis.state import Branch
from src.pore_structure.scattering import ScatteringCurve
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.twin.params import HEATER_SEGMENTS
from src.twin.state import EnvironmentRow
from src.utils.error_handler import FormatError

logger = logging.getLogger("rh_twin.cli.io")

PathLike = Union[str, Path]

TRACE_COLUMNS = ("t_s", "rh_percent", "temp_c")
POWER_COLUMNS = tuple(f"p{i}_w" for i in range(1, HEATER_SEGMENTS + 1))
CALIBRATION_COLUMNS = ("rh_percent", "capacitance_pf", "branch", "temp_c")
ISOTHERM_COLUMNS = ("p_over_p0", "amount")
SCATTERING_COLUMNS = ("q_inv_angstrom", "intensity")
FLOAT_FORMAT = "%.9g"


def read_table(path: PathLike, required: Sequence[str], numeric: Sequence[str]) -> pd.DataFrame:
    """
    Read a UTF-8 CSV with one header row.

    Args:
        path: CSV file
        required: Columns the header must contain
        numeric: Columns converted to float; a non-numeric cell is an error

    Returns:
        DataFrame with the numeric columns as float64

    Raises:
        FormatError: For an empty file, a missing column or a bad cell
    """
    try:
        frame = pd.read_csv(path, encoding="utf-8", dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise FormatError(f"{path} is empty; expected header {','.join(required)}") from None
    except pd.errors.ParserError as e:
        raise FormatError(f"{path}: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise FormatError(f"{path}: expected header {','.join(required)} (missing {', '.join(missing)})")

    for column in numeric:
        if column not in frame.columns:
            continue
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = values.isna()
        if bad.any():
            row = int(bad.to_numpy().nonzero()[0][0]) + 1
            raise FormatError(f"column {column} is not a number: {frame[column].iloc[row - 1]!r}", row=row)
        frame[column] = values.astype(float)
    logger.debug(f"Read {len(frame)} rows from {path}")
    return frame


def read_trace(path: PathLike) -> List[EnvironmentRow]:
    """Environment trace; absent power columns are zero."""
    frame = read_table(path, TRACE_COLUMNS, TRACE_COLUMNS + POWER_COLUMNS)
    rows = []
    for i, record in enumerate(frame.itertuples(index=False)):
        data = record._asdict()
        try:
            rows.append(
                EnvironmentRow(
                    t=data["t_s"],
                    rh=RelHumidity.from_percent(data["rh_percent"]),
                    temperature=Temperature.from_celsius(data["temp_c"]),
                    heater_powers=tuple(float(data.get(c, 0.0)) for c in POWER_COLUMNS),
                )
            )
        except ValidationError as e:
            raise FormatError(_first_error(e), row=i + 1) from None
    return rows


def read_calibration(path: PathLike) -> CalibrationDataset:
    frame = read_table(path, CALIBRATION_COLUMNS, ("rh_percent", "capacitance_pf", "temp_c"))
    points = []
    for i, record in enumerate(frame.itertuples(index=False)):
        data = record._asdict()
        try:
            branch = Branch.parse(data["branch"])
        except ValueError:
            raise FormatError(f"branch must be asc, desc or unk, got {data['branch']!r}", row=i + 1) from None
        try:
            points.append(
                CalibrationPoint(
                    rh=RelHumidity.from_percent(data["rh_percent"]),
                    capacitance=Capacitance(picofarads=data["capacitance_pf"]),
                    branch=branch,
                    temperature=Temperature.from_celsius(data["temp_c"]),
                )
            )
        except ValidationError as e:
            raise FormatError(_first_error(e), row=i + 1) from None
    return CalibrationDataset(points=tuple(points))


def read_isotherm(path: PathLike) -> List[Tuple[float, float]]:
    frame = read_table(path, ISOTHERM_COLUMNS, ISOTHERM_COLUMNS)
    return list(zip(frame["p_over_p0"].tolist(), frame["amount"].tolist()))


def read_scattering(path: PathLike) -> ScatteringCurve:
    frame = read_table(path, SCATTERING_COLUMNS, SCATTERING_COLUMNS)
    try:
        return ScatteringCurve.from_arrays(frame["q_inv_angstrom"], frame["intensity"])
    except ValidationError as e:
        raise FormatError(f"{path}: {_first_error(e)}") from None


def write_table(frame: pd.DataFrame, out: Optional[PathLike]) -> None:
    """Write a CSV with 9 significant digits to a file, or to stdout when out is None."""
    if out is None:
        sys.stdout.write(frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"))
        return
    frame.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    logger.info(f"Wrote {len(frame)} rows to {out}")


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first.get('msg', 'invalid value')}" if location else first.get("msg", "invalid value")
