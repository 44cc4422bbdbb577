import logging
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.quantities.units import HumidityLike, fraction_of
from src.utils.error_handler import DomainError, require_finite

logger = logging.getLogger("rh_twin.hysteresis.state")


class Branch(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, label: str) -> "Branch":
        """Accept the long names and the asc/desc/unk CSV labels."""
        key = str(label).strip().lower()
        aliases = {"asc": cls.ASCENDING, "desc": cls.DESCENDING, "unk": cls.UNKNOWN}
        if key in aliases:
            return aliases[key]
        return cls(key)

    @property
    def label(self) -> str:
        return self.value[: 4 if self is Branch.DESCENDING else 3]


class HysteresisState(BaseModel):
    """
    RH history reduced to its dominant extrema.

    memory alternates max, min, max, ... and its last entry is the current
    RH. Maxima strictly decrease and minima strictly increase along the
    sequence. An empty memory is the freshly baked sensor (all pores empty,
    current RH 0).
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    memory: Tuple[float, ...] = ()
    temperature: float = Field(298.15, gt=0.0, description="K")

    @field_validator("memory")
    @classmethod
    def _alternating_extrema(cls, memory: Tuple[float, ...]) -> Tuple[float, ...]:
        for i, value in enumerate(memory):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"memory entry {value} outside [0, 1]")
            if i == 0:
                continue
            previous = memory[i - 1]
            if (i % 2 == 1 and value >= previous) or (i % 2 == 0 and value <= previous):
                raise ValueError("memory must alternate strictly between maxima and minima")
            if i >= 2:
                older = memory[i - 2]
                if (i % 2 == 0 and value >= older) or (i % 2 == 1 and value <= older):
                    raise ValueError("memory extrema must be nested")
        if memory and memory[-1] == 0.0 and len(memory) % 2 == 0:
            raise ValueError("a history that returned to 0 is the baked state")
        return memory

    @classmethod
    def baked(cls, temperature: float = 298.15) -> "HysteresisState":
        return cls(memory=(), temperature=temperature)

    @classmethod
    def saturated(cls, temperature: float = 298.15) -> "HysteresisState":
        return cls(memory=(1.0,), temperature=temperature)

    @classmethod
    def for_branch(cls, branch: Branch, temperature: float = 298.15) -> "HysteresisState":
        """Starting state whose updates trace the given major-loop branch."""
        if Branch(branch) is Branch.DESCENDING:
            return cls.saturated(temperature)
        return cls.baked(temperature)

    @property
    def current(self) -> float:
        return self.memory[-1] if self.memory else 0.0

    @property
    def is_baked(self) -> bool:
        return not self.memory

    @property
    def rising(self) -> bool:
        """True when the last move was upward (last memory entry is a maximum)."""
        return len(self.memory) % 2 == 1


def update(state: HysteresisState, x_new: HumidityLike) -> HysteresisState:
    """
    Move the history to a new RH with the wiping-out rule.

    A rise deletes every stored max/min pair it dominates and becomes the
    newest maximum; a fall does the same against stored minima. Falling to
    0 wipes everything, because the sensor starts from a virtual minimum at 0.
    """
    x = require_finite("x_new", fraction_of(x_new))
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"relative humidity must lie in [0, 1], got {x}")

    current = state.current
    if x == current:
        return state

    memory = list(state.memory)
    rising = x > current
    if not memory:
        memory = [x]
    elif rising == state.rising:
        memory[-1] = x
    else:
        memory.append(x)

    if rising:
        while len(memory) >= 3 and memory[-3] <= x:
            del memory[-3:-1]
    else:
        while len(memory) >= 3 and memory[-3] >= x:
            del memory[-3:-1]
        if len(memory) == 2 and x <= 0.0:
            memory = []

    return state.model_copy(update={"memory": tuple(memory)})


def replay(history, state: HysteresisState = None) -> HysteresisState:
    """Apply a sequence of RH values in order, starting from the baked state by default."""
    state = state if state is not None else HysteresisState.baked()
    for x in history:
        state = update(state, x)
    return state
