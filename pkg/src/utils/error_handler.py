# src/utils/error_handler.py
from typing import Any, Optional


class TwinError(Exception):
    """Base class for sensor twin errors."""

    default_detail = "Sensor twin error"

    def __init__(self, detail: Optional[str] = None):
        self.detail = detail or self.default_detail
        super().__init__(self.detail)


class DomainError(TwinError, ValueError):
    """Error raised when an argument lies outside a function's domain."""

    default_detail = "Argument outside the function domain"


class QuantityRangeError(TwinError, ValueError):
    """Error raised when a quantity falls outside its valid interval."""

    default_detail = "Quantity outside the valid range"


class SingularityError(TwinError, ArithmeticError):
    """Error raised when a model is evaluated at a singular point."""

    default_detail = "Model evaluated at a singular point"


class DegenerateInputError(TwinError, ValueError):
    """Error raised when inputs make a quantity undefined."""

    default_detail = "Degenerate input"


class ContractViolationError(TwinError, ValueError):
    """Error raised when a value breaks a physical precondition."""

    default_detail = "Contract violation"


class DataError(TwinError, ValueError):
    """Error raised for datasets that cannot support the requested fit."""

    default_detail = "Invalid dataset"


class ConfigError(TwinError, ValueError):
    """Error raised for malformed or unknown configuration."""

    default_detail = "Invalid configuration"


class FormatError(TwinError, ValueError):
    """Error raised for malformed tabular input."""

    default_detail = "Malformed input"

    def __init__(self, detail: Optional[str] = None, row: Optional[int] = None):
        self.row = row
        if row is not None and detail:
            detail = f"row {row}: {detail}"
        super().__init__(detail)


class ReadingOutOfRangeError(TwinError, ValueError):
    """Error raised when a reading lies outside the calibrated range."""

    default_detail = "Reading outside the calibrated range"

    def __init__(self, detail: Optional[str] = None, clamped: Any = None):
        self.clamped = clamped
        super().__init__(detail)


class NonPhysicalFitError(TwinError, ValueError):
    """Error raised when a fit yields parameters without physical meaning."""

    default_detail = "Fit produced non-physical parameters"


class ConvergenceError(TwinError, RuntimeError):
    """Error raised when an optimizer stops without meeting its criterion."""

    default_detail = "Optimizer did not converge"

    def __init__(
        self,
        detail: Optional[str] = None,
        best_params: Any = None,
        report: Any = None,
    ):
        self.best_params = best_params
        self.report = report
        super().__init__(detail)


class BoundaryFitError(ConvergenceError):
    """Error raised when a fitted parameter collapses onto its bound."""

    default_detail = "Fitted parameter collapsed onto its bound"


def require_finite(name: str, value: float) -> float:
    """
    Reject NaN and infinite scalars.

    Args:
        name: Field name used in the error message
        value: Value to check

    Returns:
        The value as float

    Raises:
        DomainError: If the value is NaN or infinite
    """
    import math

    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value
