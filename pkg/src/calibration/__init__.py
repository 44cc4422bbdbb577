"""
Calibration Module

Damped least-squares engine plus the fitting workflows built on it: BET
transform fit, full sensor calibration and saturated-salt fixed points.
Import from the submodules (src.calibration.engine is also used by
src.pore_structure).
"""
