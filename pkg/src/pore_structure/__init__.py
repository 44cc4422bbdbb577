"""Pore-radius distribution of the alumina layer and the GISAXS Lorentzian model."""

from src.pore_structure.distribution import (
    PoreDistribution,
    PoreMode,
    classify_pore_width,
    default_alumina_distribution,
    upper_partial_moment,
    volume_cdf,
    volume_pdf,
)
from src.pore_structure.scattering import (
    LorentzianParams,
    ScatteringCurve,
    ScatteringPoint,
    estimate_lorentzian_init,
    fit_lorentzian,
    lorentzian_intensity,
    lorentzian_jacobian,
)

__all__ = [
    "LorentzianParams",
    "PoreDistribution",
    "PoreMode",
    "ScatteringCurve",
    "ScatteringPoint",
    "classify_pore_width",
    "default_alumina_distribution",
    "estimate_lorentzian_init",
    "fit_lorentzian",
    "lorentzian_intensity",
    "lorentzian_jacobian",
    "upper_partial_moment",
    "volume_cdf",
    "volume_pdf",
]
