"""Shared logging setup and the error hierarchy."""

from src.utils.error_handler import (
    BoundaryFitError,
    ConfigError,
    ContractViolationError,
    ConvergenceError,
    DataError,
    DegenerateInputError,
    DomainError,
    FormatError,
    NonPhysicalFitError,
    QuantityRangeError,
    ReadingOutOfRangeError,
    SingularityError,
    TwinError,
)
from src.utils.logger import setup_logging

__all__ = [
    "BoundaryFitError",
    "ConfigError",
    "ContractViolationError",
    "ConvergenceError",
    "DataError",
    "DegenerateInputError",
    "DomainError",
    "FormatError",
    "NonPhysicalFitError",
    "QuantityRangeError",
    "ReadingOutOfRangeError",
    "SingularityError",
    "TwinError",
    "setup_logging",
]
