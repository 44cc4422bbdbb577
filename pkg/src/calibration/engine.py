import logging
import os
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field

from src.utils.error_handler import ConfigError, ContractViolationError, ConvergenceError, DataError

ResidualFn = Callable[[np.ndarray], np.ndarray]


class FitProblem:
    """Residual function, starting point, box bounds and per-parameter scale."""

    def __init__(
        self,
        residuals: ResidualFn,
        x0,
        lower=None,
        upper=None,
        scale=None,
        names: Sequence[str] = (),
    ):
        x0 = np.asarray(x0, dtype=float).ravel()
        n = x0.size
        if n == 0:
            raise ContractViolationError("a fit needs at least one free parameter")
        lower = np.full(n, -np.inf) if lower is None else np.asarray(lower, dtype=float)
        upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
        if lower.shape != (n,) or upper.shape != (n,):
            raise ContractViolationError("bounds must match the parameter vector")
        if np.any(lower > upper):
            raise ContractViolationError("lower bound above upper bound")
        if not np.all(np.isfinite(x0)):
            raise ContractViolationError("initial parameters must be finite")
        if np.any(x0 < lower) or np.any(x0 > upper):
            raise ContractViolationError(f"initial parameters {x0.tolist()} lie outside their bounds")
        scale = np.where(x0 != 0.0, np.abs(x0), 1.0) if scale is None else np.asarray(scale, dtype=float)
        if scale.shape != (n,) or np.any(scale <= 0):
            raise ContractViolationError("scale must be positive per parameter")

        self.residuals = residuals
        self.x0 = x0
        self.lower = lower
        self.upper = upper
        self.scale = scale
        self.names = tuple(names) or tuple(f"p{i}" for i in range(n))


class FitReport(BaseModel):
    """Outcome of a least-squares run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: np.ndarray
    residual_norm: float = Field(..., ge=0.0)
    iterations: int = Field(..., ge=0)
    converged: bool
    covariance: np.ndarray
    names: Tuple[str, ...] = ()
    message: str = ""
    history: List[float] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def as_dict(self) -> Dict[str, float]:
        return {name: float(value) for name, value in zip(self.names, self.params)}


def fd_jacobian(
    residuals: ResidualFn,
    x: np.ndarray,
    lower: Optional[np.ndarray] = None,
    upper: Optional[np.ndarray] = None,
    r0: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Finite-difference Jacobian of the residual vector.

    Central differences with step max(1e-6 |x_j|, 1e-8); one-sided when
    a central step would leave the box.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    lower = np.full(n, -np.inf) if lower is None else lower
    upper = np.full(n, np.inf) if upper is None else upper
    if r0 is None:
        r0 = np.asarray(residuals(x), dtype=float)
    jac = np.empty((r0.size, n))
    for j in range(n):
        h = max(1e-6 * abs(x[j]), 1e-8)
        forward = x.copy()
        backward = x.copy()
        forward[j] += h
        backward[j] -= h
        if forward[j] <= upper[j] and backward[j] >= lower[j]:
            jac[:, j] = (np.asarray(residuals(forward)) - np.asarray(residuals(backward))) / (2.0 * h)
        elif forward[j] <= upper[j]:
            jac[:, j] = (np.asarray(residuals(forward)) - r0) / h
        else:
            jac[:, j] = (r0 - np.asarray(residuals(backward))) / h
    return jac


class DampedLeastSquares:
    """Box-bounded Levenberg-Marquardt solver over finite-difference Jacobians."""

    DEFAULTS = {
        "max_iterations": 200,
        "initial_damping": 1e-3,
        "damping_factor": 10.0,
        "max_damping": 1e12,
        "cost_tolerance": 1e-10,
        "step_tolerance": 1e-10,
    }

    def __init__(self, config_path: str = "config/settings.yaml", **overrides):
        self.logger = logging.getLogger("rh_twin.calibration.engine")
        self.settings = self._load_settings(config_path)
        for key, value in overrides.items():
            if key not in self.DEFAULTS:
                raise ConfigError(f"unknown optimizer setting '{key}'")
            self.settings[key] = type(self.DEFAULTS[key])(value)

    def _load_settings(self, config_path: str) -> Dict[str, float]:
        """Load optimizer settings, falling back to the defaults."""
        settings = dict(self.DEFAULTS)
        try:
            if os.path.exists(config_path):
                with open(config_path, "r", encoding="utf-8") as file:
                    config = yaml.safe_load(file) or {}
                for key, value in (config.get("optimizer") or {}).items():
                    if key in settings:
                        settings[key] = type(settings[key])(value)
        except (OSError, yaml.YAMLError, TypeError, ValueError) as e:
            self.logger.error(f"Error loading optimizer settings: {e}")
        return settings

    def _evaluate(self, problem: FitProblem, x: np.ndarray) -> np.ndarray:
        return np.asarray(problem.residuals(x), dtype=float).ravel()

    def _covariance(self, problem: FitProblem, x: np.ndarray, r: np.ndarray) -> np.ndarray:
        jac = fd_jacobian(problem.residuals, x, problem.lower, problem.upper, r)
        dof = max(r.size - x.size, 1)
        s2 = float(r @ r) / dof
        cov = s2 * np.linalg.pinv(jac.T @ jac)
        return 0.5 * (cov + cov.T)

    def solve(self, problem: FitProblem) -> FitReport:
        """
        Minimise ||r(x)|| inside the bounds.

        Args:
            problem: Residual function, start, bounds and scale

        Returns:
            FitReport; converged is False when the iteration cap was hit

        Raises:
            DataError: If there are fewer residuals than parameters
            ConvergenceError: If the damping escalates past its ceiling
        """
        cfg = self.settings
        x = problem.x0.copy()
        r = self._evaluate(problem, x)
        if r.size < x.size:
            raise DataError(f"{r.size} residuals cannot determine {x.size} parameters")
        if not np.all(np.isfinite(r)):
            raise ContractViolationError("residuals are not finite at the initial parameters")

        cost = float(np.linalg.norm(r))
        history = [cost]
        damping = cfg["initial_damping"]
        converged = cost == 0.0
        message = "zero residual" if converged else ""
        iterations = 0

        while not converged and iterations < cfg["max_iterations"]:
            iterations += 1
            jac = fd_jacobian(problem.residuals, x, problem.lower, problem.upper, r)
            gradient = jac.T @ r
            normal = jac.T @ jac
            diag = np.diag(normal).copy()
            if not np.any(diag > 0):
                converged, message = True, "zero gradient"
                break
            diag = np.maximum(diag, 1e-12 * diag.max())

            while True:
                try:
                    delta = np.linalg.solve(normal + damping * np.diag(diag), -gradient)
                    if not np.all(np.isfinite(delta)):
                        raise np.linalg.LinAlgError("non-finite step")
                except np.linalg.LinAlgError:
                    damping *= cfg["damping_factor"]
                    self._check_damping(damping, problem, x, cost, iterations, history)
                    continue

                x_new = np.clip(x + delta, problem.lower, problem.upper)
                step = x_new - x
                step_small = np.linalg.norm(step / problem.scale) <= cfg["step_tolerance"] * (
                    np.linalg.norm(x / problem.scale) + cfg["step_tolerance"]
                )
                r_new = self._evaluate(problem, x_new)
                cost_new = float(np.linalg.norm(r_new)) if np.all(np.isfinite(r_new)) else np.inf

                if cost_new < cost:
                    decrease = (cost - cost_new) / cost
                    x, r, cost = x_new, r_new, cost_new
                    history.append(cost)
                    damping = max(damping / cfg["damping_factor"], 1e-15)
                    self.logger.debug(f"iteration {iterations}: |r| = {cost:.9g}, damping = {damping:.3g}")
                    if cost == 0.0:
                        converged, message = True, "zero residual"
                    elif decrease < cfg["cost_tolerance"]:
                        converged, message = True, "relative residual decrease below tolerance"
                    elif step_small:
                        converged, message = True, "relative step below tolerance"
                    break

                if step_small:
                    converged, message = True, "relative step below tolerance"
                    break
                damping *= cfg["damping_factor"]
                self._check_damping(damping, problem, x, cost, iterations, history)

        if not converged:
            message = f"iteration cap of {cfg['max_iterations']} reached"
            self.logger.warning(f"Least squares stopped without converging after {iterations} iterations")
        else:
            self.logger.info(f"Least squares converged in {iterations} iterations, |r| = {cost:.9g}")

        return FitReport(
            params=x,
            residual_norm=cost,
            iterations=iterations,
            converged=converged,
            covariance=self._covariance(problem, x, r),
            names=problem.names,
            message=message,
            history=history,
        )

    def _check_damping(self, damping, problem, x, cost, iterations, history) -> None:
        if damping <= self.settings["max_damping"]:
            return
        report = FitReport(
            params=x.copy(),
            residual_norm=cost,
            iterations=iterations,
            converged=False,
            covariance=np.full((x.size, x.size), np.nan),
            names=problem.names,
            message="damping exceeded its ceiling",
            history=list(history),
        )
        raise ConvergenceError(
            f"damping exceeded {self.settings['max_damping']:g} after {iterations} iterations",
            best_params=x.copy(),
            report=report,
        )


def least_squares(problem: FitProblem, **settings) -> FitReport:
    """Solve a FitProblem with the default damped least-squares settings."""
    return DampedLeastSquares(**settings).solve(problem)
