"""Outer inexact Newton driver with discrepancy-principle stopping.

Each outer step linearizes the forward map at the current iterate and
applies one regularized inversion of the linearization to the data
residual:

    x_{n+1} = x_n - g_{a_n}(K_n* K_n) K_n* (F(x_n) - y_delta),

with K_n = F'(x_n).  Iteration stops at the first residual below
tau * delta (or at a residual floor when delta = 0), at the outer budget,
or when an iterate leaves the problem domain.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from typing import IO, Optional

import numpy as np

from .errors import ScalingError, SingularSystemError
from .filters import (
    FilterSpec,
    apply_filter_iterative,
    apply_filter_spectral,
    inner_iteration_count,
    DEFAULT_INNER_BUDGET,
)
from .linalg import estimate_operator_norm, sym_eigen
from .schedules import AlphaSchedule

SPECTRAL_PATH_DIM_CAP = 512


class InverseProblem:
    """A forward operator with derivative and adjoint actions.

    Subclasses implement ``evaluate``, ``derivative_apply`` and
    ``adjoint_apply``; the two actions must be mutually adjoint under the
    (uniformly) weighted inner products declared by ``weight_x`` and
    ``weight_y``.  ``jacobian_matrix`` may return a dense derivative to
    enable the exact spectral filter path.
    """

    def __init__(self, model_dim: int, data_dim: int,
                 weight_x: float = 1.0, weight_y: float = 1.0):
        self.model_dim = model_dim
        self.data_dim = data_dim
        self.weight_x = weight_x
        self.weight_y = weight_y

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative_apply(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def adjoint_apply(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def in_domain(self, x: np.ndarray) -> bool:
        return True

    def jacobian_matrix(self, x: np.ndarray) -> Optional[np.ndarray]:
        return None

    def norm_x(self, v: np.ndarray) -> float:
        return float(np.sqrt(self.weight_x) * np.linalg.norm(v))

    def norm_y(self, v: np.ndarray) -> float:
        return float(np.sqrt(self.weight_y) * np.linalg.norm(v))

    def inner_x(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(self.weight_x * np.dot(u, v))

    def inner_y(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(self.weight_y * np.dot(u, v))


@dataclass
class SolveConfig:
    """Everything a single regularized Newton run needs."""

    filter: FilterSpec
    schedule: AlphaSchedule
    x0: np.ndarray
    tau: float = 1.1
    delta: float = 0.0
    n_max: int = 60
    scaling_check: str = "warn"  # "off" | "warn" | "error"
    use_spectral_path: bool = True
    residual_floor: float = 1e-14
    max_inner: int = DEFAULT_INNER_BUDGET

    def __post_init__(self):
        if not self.tau > 1.0:
            raise ValueError("tau must exceed 1")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.scaling_check not in ("off", "warn", "error"):
            raise ValueError("scaling_check must be 'off', 'warn' or 'error'")


@dataclass
class StepRecord:
    n: int
    x: np.ndarray
    residual: float
    error: Optional[float]
    inner_iterations: int
    alpha: float
    partial_sum: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "residual": self.residual,
            "error": self.error,
            "inner_iterations": self.inner_iterations,
            "alpha": self.alpha,
            "partial_sum": self.partial_sum,
            "x": [float(v) for v in self.x],
        }


@dataclass
class IterationTrace:
    """Append-only record of one solve."""

    steps: list[StepRecord] = field(default_factory=list)
    termination: str = "budget"  # discrepancy | residual_floor | budget | domain_exit
    failure: Optional[str] = None
    operator_norm_estimate: Optional[float] = None

    @property
    def n_final(self) -> int:
        return self.steps[-1].n

    @property
    def final_x(self) -> np.ndarray:
        return self.steps[-1].x

    @property
    def final_residual(self) -> float:
        return self.steps[-1].residual

    def residuals(self) -> np.ndarray:
        return np.array([s.residual for s in self.steps])

    def write_jsonl(self, stream: IO[str]) -> None:
        for s in self.steps:
            stream.write(json.dumps(s.to_dict()) + "\n")

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(["n", "residual", "error", "inner_iterations", "alpha", "partial_sum"])
        for s in self.steps:
            writer.writerow([s.n, repr(s.residual), "" if s.error is None else repr(s.error),
                             s.inner_iterations, repr(s.alpha), repr(s.partial_sum)])


def _operator_norm(problem: InverseProblem, x: np.ndarray) -> float:
    jac = problem.jacobian_matrix(x)
    if jac is not None:
        # uniform-weight inner products leave the spectral norm untouched
        # once the weights on both sides agree; otherwise rescale
        scale = np.sqrt(problem.weight_y / problem.weight_x)
        return float(scale * np.linalg.norm(jac, 2))
    est = estimate_operator_norm(
        lambda h: problem.derivative_apply(x, h),
        lambda w: problem.adjoint_apply(x, w),
        problem.model_dim,
    )
    return est.value


def solve(
    problem: InverseProblem,
    y_delta: np.ndarray,
    cfg: SolveConfig,
    x_truth: Optional[np.ndarray] = None,
) -> IterationTrace:
    """Run the regularized Newton iteration until a stopping rule fires.

    With delta > 0 the discrepancy principle stops at the first n with
    ||F(x_n) - y_delta|| <= tau*delta; with delta = 0 the same role is
    played by ``cfg.residual_floor``.  Leaving the problem domain (or a
    singular state solve) truncates the trace before the bad step.
    """
    y_delta = np.asarray(y_delta, dtype=float)
    x = np.asarray(cfg.x0, dtype=float).copy()
    if not problem.in_domain(x):
        raise ValueError("x0 is outside the problem domain")

    trace = IterationTrace()
    if cfg.scaling_check != "off":
        norm0 = _operator_norm(problem, x)
        trace.operator_norm_estimate = norm0
        bound = min(1.0, np.sqrt(cfg.schedule.alpha(0)))
        if norm0 > bound:
            msg = (f"||F'(x0)|| ~ {norm0:.3g} exceeds min(1, sqrt(alpha0)) = {bound:.3g}; "
                   f"the forward map is not properly scaled")
            if cfg.scaling_check == "error":
                raise ScalingError(msg)
            warnings.warn(msg, stacklevel=2)

    spectral_ok = (
        cfg.use_spectral_path
        and problem.model_dim <= SPECTRAL_PATH_DIM_CAP
        and problem.weight_x == problem.weight_y
    )

    for n in range(cfg.n_max + 1):
        try:
            residual_vec = problem.evaluate(x) - y_delta
        except SingularSystemError as exc:
            trace.termination = "domain_exit"
            trace.failure = f"step {n}: {exc}"
            break
        res = problem.norm_y(residual_vec)
        err = None if x_truth is None else problem.norm_x(x - x_truth)
        alpha_n = cfg.schedule.alpha(n)
        trace.steps.append(StepRecord(
            n=n, x=x.copy(), residual=res, error=err,
            inner_iterations=0, alpha=alpha_n,
            partial_sum=cfg.schedule.partial_sum(n),
        ))
        if cfg.delta > 0 and res <= cfg.tau * cfg.delta:
            trace.termination = "discrepancy"
            break
        if cfg.delta == 0 and res <= cfg.residual_floor:
            trace.termination = "residual_floor"
            break
        if n == cfg.n_max:
            trace.termination = "budget"
            break

        jac = problem.jacobian_matrix(x) if spectral_ok else None
        try:
            if jac is not None:
                step = apply_filter_spectral(cfg.filter, alpha_n, jac, residual_vec)
            else:
                step = apply_filter_iterative(
                    cfg.filter, alpha_n,
                    lambda h: problem.derivative_apply(x, h),
                    lambda w: problem.adjoint_apply(x, w),
                    residual_vec, max_inner=cfg.max_inner,
                )
        except SingularSystemError as exc:
            trace.termination = "domain_exit"
            trace.failure = f"step {n}: {exc}"
            break
        trace.steps[-1].inner_iterations = inner_iteration_count(cfg.filter, alpha_n)
        x_next = x - step
        if not problem.in_domain(x_next):
            trace.termination = "domain_exit"
            trace.failure = f"step {n}: iterate left the domain"
            break
        x = x_next
    return trace


@dataclass
class SourceDiagnostic:
    """Least-squares fit of the source representation of the initial error."""

    omega_norm_estimate: float
    residual_of_fit: float
    excluded_modes: int

    def to_dict(self) -> dict:
        return {
            "omega_norm_estimate": self.omega_norm_estimate,
            "residual_of_fit": self.residual_of_fit,
            "excluded_modes": self.excluded_modes,
        }


def source_condition_diagnostic(
    problem: InverseProblem,
    x_truth: np.ndarray,
    x0: np.ndarray,
    nu: float,
    eigenvalue_floor: float = 1e-12,
) -> SourceDiagnostic:
    """Fit (K*K)^nu omega = x0 - x_truth with K the derivative at the truth.

    Modes whose eigenvalue power falls below ``eigenvalue_floor`` are
    excluded from the fit; ``residual_of_fit`` is the fraction of the
    initial error living on the excluded modes.
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError("nu must lie in (0, 1]")
    jac = problem.jacobian_matrix(np.asarray(x_truth, dtype=float))
    if jac is None:
        raise ValueError("problem does not provide a materialized derivative")
    dec = sym_eigen(np.asarray(jac).T @ np.asarray(jac))
    lam = np.clip(dec.eigenvalues, 0.0, None)
    e = np.asarray(x0, dtype=float) - np.asarray(x_truth, dtype=float)
    coeffs = dec.eigenvectors.T @ e
    powered = lam**nu
    include = powered >= eigenvalue_floor
    omega_coeffs = np.where(include, coeffs / np.where(include, powered, 1.0), 0.0)
    total = np.linalg.norm(coeffs)
    unexplained = 0.0 if total == 0 else float(np.linalg.norm(coeffs[~include]) / total)
    omega_norm = float(np.sqrt(problem.weight_x) * np.linalg.norm(omega_coeffs))
    return SourceDiagnostic(
        omega_norm_estimate=omega_norm,
        residual_of_fit=unexplained,
        excluded_modes=int(np.count_nonzero(~include)),
    )
