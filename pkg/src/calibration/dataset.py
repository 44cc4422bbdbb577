from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.hysteresis.state import Branch
from src.quantities.units import Capacitance, RelHumidity, Temperature


class DatasetMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    frequency_hz: float = Field(16000.0, gt=0.0)
    source: str = ""


class CalibrationPoint(BaseModel):
    """One measured capacitance with the RH, branch and temperature it was taken at."""

    model_config = ConfigDict(frozen=True)

    rh: RelHumidity
    capacitance: Capacitance
    branch: Branch = Branch.UNKNOWN
    temperature: Temperature = Field(default_factory=lambda: Temperature.from_celsius(25.0))


class CalibrationDataset(BaseModel):
    model_config = ConfigDict(frozen=True)

    points: Tuple[CalibrationPoint, ...] = ()
    metadata: DatasetMetadata = Field(default_factory=DatasetMetadata)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def labelled(self) -> bool:
        """True when at least one point carries a branch label."""
        return any(p.branch is not Branch.UNKNOWN for p in self.points)

    def scaled(self, factor: float) -> "CalibrationDataset":
        """Dataset with every capacitance multiplied by factor."""
        points = tuple(
            p.model_copy(update={"capacitance": Capacitance(picofarads=p.capacitance.picofarads * factor)})
            for p in self.points
        )
        return self.model_copy(update={"points": points})
