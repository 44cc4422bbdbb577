"""Filled pore volume to permittivity and capacitance."""

from src.dielectric.response import (
    DielectricParams,
    ResponseCurve,
    capacitance,
    effective_permittivity,
    morphology_exponent,
)

__all__ = [
    "DielectricParams",
    "ResponseCurve",
    "capacitance",
    "effective_permittivity",
    "morphology_exponent",
]
