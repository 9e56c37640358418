"""Estimator-style facade over the Newton driver.

``InexactNewtonSolver`` follows the scikit-learn parameter protocol
(``get_params`` / ``set_params``, constructor stores hyperparameters
verbatim, fitted state carries a trailing underscore) so the solver drops
into grid searches and pipelines that only need that contract.
"""

from __future__ import annotations

import inspect
from typing import Optional

import numpy as np

from .filters import filter_from_name
from .newton import InverseProblem, SolveConfig, solve
from .schedules import GeometricSchedule


class InexactNewtonSolver:
    """Regularized Newton solver with discrepancy-principle stopping.

    Parameters
    ----------
    filter : str
        Filter family: "landweber", "tikhonov", "exponential-euler", "lardy".
    tikhonov_order : int
        Inner-iteration order for the Tikhonov family.
    alpha0, decay : float
        Geometric schedule alpha_n = alpha0 * decay**n.
    tau : float
        Discrepancy-principle factor, > 1.
    noise_level : float
        Noise bound delta on the data; 0 means noise-free.
    n_max : int
        Outer-iteration budget.
    scaling_check : str
        "off", "warn" or "error" on violated operator scaling.
    use_spectral_path : bool
        Allow the exact spectral filter path when a dense derivative exists.
    """

    def __init__(self, filter="landweber", tikhonov_order=1, alpha0=1.0, decay=0.5,
                 tau=1.1, noise_level=0.0, n_max=60, scaling_check="warn",
                 use_spectral_path=True):
        self.filter = filter
        self.tikhonov_order = tikhonov_order
        self.alpha0 = alpha0
        self.decay = decay
        self.tau = tau
        self.noise_level = noise_level
        self.n_max = n_max
        self.scaling_check = scaling_check
        self.use_spectral_path = use_spectral_path

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "InexactNewtonSolver":
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def _config(self, x0: np.ndarray) -> SolveConfig:
        return SolveConfig(
            filter=filter_from_name(self.filter, self.tikhonov_order),
            schedule=GeometricSchedule(self.alpha0, self.decay),
            x0=np.asarray(x0, dtype=float),
            tau=self.tau,
            delta=self.noise_level,
            n_max=self.n_max,
            scaling_check=self.scaling_check,
            use_spectral_path=self.use_spectral_path,
        )

    def fit(self, problem: InverseProblem, y: np.ndarray, x0: np.ndarray,
            x_truth: Optional[np.ndarray] = None) -> "InexactNewtonSolver":
        """Run the iteration on data ``y`` starting from ``x0``."""
        trace = solve(problem, y, self._config(x0), x_truth=x_truth)
        self.problem_ = problem
        self.trace_ = trace
        self.x_ = trace.final_x
        self.n_iter_ = trace.n_final
        self.termination_ = trace.termination
        return self

    def predict(self) -> np.ndarray:
        """Forward map at the recovered model (the fitted data)."""
        if not hasattr(self, "x_"):
            raise RuntimeError("call fit before predict")
        return self.problem_.evaluate(self.x_)
