"""Spectral filter families and their application to linear operators.

Four families are supported:

* iterated Tikhonov of order N:  g(lam) = ((a+lam)^N - a^N) / (lam (a+lam)^N)
* exponential Euler:             g(lam) = (1 - exp(-lam/a)) / lam
* Landweber:                     g(lam) = (1 - (1-lam)^L) / lam,  L = floor(1/a)
* Lardy:                         g(lam) = (1 - (1+lam)^-L) / lam, L = floor(1/a)

Each comes with its residual function r(lam) = 1 - lam*g(lam) in closed
form, an inner-iteration realization of g(K*K) K* b, and an exact spectral
oracle through the eigendecomposition of K^T K.  ``verify_a5_bounds``
samples the uniform filter bounds that the convergence theory assumes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import FilterDomainError, InnerBudgetError, LinearSolveError
from .linalg import sym_eigen
from .schedules import AlphaSchedule

DEFAULT_INNER_BUDGET = 2**22


@dataclass(frozen=True)
class IteratedTikhonov:
    """Iterated Tikhonov of order N (N=1 is Levenberg-Marquardt)."""

    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("Tikhonov order must be >= 1")

    def label(self) -> str:
        return f"tikhonov(N={self.order})"


@dataclass(frozen=True)
class ExponentialEuler:
    def label(self) -> str:
        return "exponential_euler"


@dataclass(frozen=True)
class Landweber:
    def label(self) -> str:
        return "landweber"


@dataclass(frozen=True)
class Lardy:
    def label(self) -> str:
        return "lardy"


FilterSpec = Union[IteratedTikhonov, ExponentialEuler, Landweber, Lardy]

_NAMES = {
    "tikhonov": IteratedTikhonov,
    "iterated-tikhonov": IteratedTikhonov,
    "levenberg-marquardt": IteratedTikhonov,
    "exponential-euler": ExponentialEuler,
    "landweber": Landweber,
    "lardy": Lardy,
}


def filter_from_name(name: str, tikhonov_order: int = 1) -> FilterSpec:
    key = name.strip().lower().replace("_", "-")
    try:
        cls = _NAMES[key]
    except KeyError:
        raise ValueError(f"unknown filter family {name!r}; choose from {sorted(_NAMES)}") from None
    if cls is IteratedTikhonov:
        return IteratedTikhonov(order=tikhonov_order)
    return cls()


def all_families(tikhonov_order: int = 1) -> list[FilterSpec]:
    return [IteratedTikhonov(tikhonov_order), ExponentialEuler(), Landweber(), Lardy()]


def _check_alpha(spec: FilterSpec, alpha: float) -> None:
    if not alpha > 0:
        raise FilterDomainError(f"alpha must be positive, got {alpha}")
    if isinstance(spec, (Landweber, Lardy)) and alpha > 1:
        raise FilterDomainError(f"{spec.label()} requires 0 < alpha <= 1, got {alpha}")


def inner_iteration_count(spec: FilterSpec, alpha: float) -> int:
    """Length of the inner recurrence realizing g_alpha (1 for the ODE family)."""
    _check_alpha(spec, alpha)
    if isinstance(spec, IteratedTikhonov):
        return spec.order
    if isinstance(spec, (Landweber, Lardy)):
        return int(math.floor(1.0 / alpha))
    return 1


def eval_g(spec: FilterSpec, alpha: float, lam) -> np.ndarray | float:
    """g_alpha(lam) on lam in [0, 1], with the removable singularity at 0 filled in."""
    _check_alpha(spec, alpha)
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    if np.any((lam_arr < 0) | (lam_arr > 1)):
        raise ValueError("lambda must lie in [0, 1]")
    pos = lam_arr > 0
    safe = np.where(pos, lam_arr, 1.0)
    with np.errstate(divide="ignore"):
        if isinstance(spec, IteratedTikhonov):
            expo = spec.order * (np.log(alpha) - np.log(alpha + safe))
            out = np.where(pos, -np.expm1(expo) / safe, spec.order / alpha)
        elif isinstance(spec, ExponentialEuler):
            out = np.where(pos, -np.expm1(-safe / alpha) / safe, 1.0 / alpha)
        elif isinstance(spec, Landweber):
            steps = math.floor(1.0 / alpha)
            out = np.where(pos, -np.expm1(steps * np.log1p(-safe)) / safe, float(steps))
        else:
            steps = math.floor(1.0 / alpha)
            out = np.where(pos, -np.expm1(-steps * np.log1p(safe)) / safe, float(steps))
    return float(out[0]) if scalar else out


def log_residual(spec: FilterSpec, alpha: float, lam) -> np.ndarray | float:
    """log r_alpha(lam), exactly -inf where the residual vanishes."""
    _check_alpha(spec, alpha)
    lam_arr = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        if isinstance(spec, IteratedTikhonov):
            return spec.order * (np.log(alpha) - np.log(alpha + lam_arr))
        if isinstance(spec, ExponentialEuler):
            return -lam_arr / alpha
        if isinstance(spec, Landweber):
            return math.floor(1.0 / alpha) * np.log1p(-lam_arr)
        return -math.floor(1.0 / alpha) * np.log1p(lam_arr)


def eval_residual(spec: FilterSpec, alpha: float, lam) -> np.ndarray | float:
    """Residual function r_alpha(lam) = 1 - lam*g_alpha(lam), in closed form."""
    out = np.exp(log_residual(spec, alpha, lam))
    return float(out) if np.ndim(lam) == 0 else out


def _cg_solve(matvec: Callable[[np.ndarray], np.ndarray], rhs: np.ndarray,
              rtol: float = 1e-14) -> np.ndarray:
    n = rhs.shape[0]
    op = scipy.sparse.linalg.LinearOperator((n, n), matvec=matvec, dtype=float)
    x, info = scipy.sparse.linalg.cg(op, rhs, rtol=rtol, atol=0.0, maxiter=max(20 * n, 200))
    if info != 0:
        raise LinearSolveError(f"CG failed to converge (info={info})")
    return x


def _materialize(apply_op, apply_adjoint, b):
    """Build the matrix of K by probing unit vectors (model dim from K* b)."""
    w = np.asarray(apply_adjoint(np.asarray(b, dtype=float)), dtype=float)
    d = w.shape[0]
    cols = [np.asarray(apply_op(np.eye(d)[:, i]), dtype=float) for i in range(d)]
    return np.column_stack(cols), w


def apply_filter_iterative(
    spec: FilterSpec,
    alpha: float,
    apply_op: Callable[[np.ndarray], np.ndarray],
    apply_adjoint: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    max_inner: int = DEFAULT_INNER_BUDGET,
) -> np.ndarray:
    """g_alpha(K*K) K* b through the family's inner-iteration recurrence.

    The caller is responsible for ||K|| <= 1.  The exponential Euler family
    has no finite recurrence; its linear-ODE characterization is evaluated
    exactly through a phi-function of the materialized normal operator.
    """
    _check_alpha(spec, alpha)
    b = np.asarray(b, dtype=float)

    if isinstance(spec, IteratedTikhonov):
        z = None
        for _ in range(spec.order):
            resid = b if z is None else b - np.asarray(apply_op(z), dtype=float)
            rhs = np.asarray(apply_adjoint(resid), dtype=float)
            v = _cg_solve(
                lambda u: alpha * u + np.asarray(apply_adjoint(apply_op(u)), dtype=float), rhs
            )
            z = v if z is None else z + v
        return z

    if isinstance(spec, (Landweber, Lardy)):
        steps = math.floor(1.0 / alpha)
        if steps > max_inner:
            raise InnerBudgetError(
                f"{spec.label()} needs {steps} inner steps, budget is {max_inner}"
            )
        z = None
        for _ in range(steps):
            resid = b if z is None else b - np.asarray(apply_op(z), dtype=float)
            rhs = np.asarray(apply_adjoint(resid), dtype=float)
            if isinstance(spec, Lardy):
                rhs = _cg_solve(
                    lambda u: u + np.asarray(apply_adjoint(apply_op(u)), dtype=float), rhs
                )
            z = rhs if z is None else z + rhs
        if z is None:  # steps >= 1 always, guarded by _check_alpha
            z = np.asarray(apply_adjoint(b), dtype=float) * 0.0
        return z

    # exponential Euler: z solves z' = K*b - K*K z, z(0) = 0, at t = 1/alpha.
    # phi1 through the augmented-matrix exponential keeps this path
    # independent of the eigendecomposition oracle.
    k_mat, w = _materialize(apply_op, apply_adjoint, b)
    d = w.shape[0]
    t = 1.0 / alpha
    aug = np.zeros((d + 1, d + 1))
    aug[:d, :d] = -t * (k_mat.T @ k_mat)
    aug[:d, d] = t * w
    return scipy.linalg.expm(aug)[:d, d]


def apply_filter_spectral(
    spec: FilterSpec, alpha: float, k_matrix: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """Exact g_alpha(K*K) K* b through the eigendecomposition of K^T K."""
    _check_alpha(spec, alpha)
    k_matrix = np.asarray(k_matrix, dtype=float)
    b = np.asarray(b, dtype=float)
    w = k_matrix.T @ b
    dec = sym_eigen(k_matrix.T @ k_matrix)
    lam = np.clip(dec.eigenvalues, 0.0, 1.0)
    g = eval_g(spec, alpha, lam)
    q = dec.eigenvectors
    return q @ (g * (q.T @ w))


def default_lambda_grid(n_interior: int = 512) -> np.ndarray:
    """Chebyshev-spaced points on [0, 1] plus the endpoints."""
    k = np.arange(n_interior)
    nodes = 0.5 * (1.0 - np.cos((2 * k + 1) * np.pi / (2 * n_interior)))
    return np.unique(np.concatenate(([0.0], nodes, [1.0])))


DEFAULT_NU_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass
class FilterBoundReport:
    """Observed constants from sampling the uniform filter bounds on a grid."""

    max_g1_violation: float
    observed_b2: float
    grid: str
    schedule_prefix_length: int

    def to_dict(self) -> dict:
        return {
            "max_g1_violation": self.max_g1_violation,
            "observed_b2": self.observed_b2,
            "grid": self.grid,
            "schedule_prefix_length": self.schedule_prefix_length,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def verify_a5_bounds(
    spec: FilterSpec,
    schedule: AlphaSchedule,
    n_max: int,
    lam_grid: Sequence[float] | None = None,
    nu_grid: Sequence[float] = DEFAULT_NU_GRID,
) -> FilterBoundReport:
    """Sample the two uniform filter bounds over (j, n, nu, lambda).

    Checks  lam^nu * prod_{k=j..n} r_{a_k}(lam) <= (s_n - s_{j-1})^{-nu}
    and records the largest positive excess, together with the observed
    constant  max  a_j (s_n - s_{j-1})^nu lam^nu g_{a_j}(lam)
    prod_{k=j+1..n} r_{a_k}(lam).  Products run in log space so long
    residual products neither underflow nor lose the exact zeros.
    """
    lam = np.asarray(default_lambda_grid() if lam_grid is None else lam_grid, dtype=float)
    nus = np.asarray(nu_grid, dtype=float)
    alphas = np.array([schedule.alpha(n) for n in range(n_max + 1)])
    sums = np.array([schedule.partial_sum(n) for n in range(-1, n_max + 1)])  # sums[k] = s_{k-1}

    log_r = np.vstack([log_residual(spec, alphas[k], lam) for k in range(n_max + 1)])
    # exact zeros (log r = -inf) are tracked separately so cumulative-sum
    # differences stay finite for windows that do not contain them
    zero_factor = np.isneginf(log_r)
    log_r_finite = np.where(zero_factor, 0.0, log_r)
    cum = np.vstack([np.zeros_like(lam), np.cumsum(log_r_finite, axis=0)])
    zeros_before = np.vstack([np.zeros_like(lam), np.cumsum(zero_factor, axis=0)])

    def window_product(j: int, n_excl: int) -> np.ndarray:
        """prod_{k=j..n_excl-1} r_{a_k}(lam), exact zeros preserved."""
        prod = np.exp(cum[n_excl] - cum[j])
        return np.where(zeros_before[n_excl] - zeros_before[j] > 0, 0.0, prod)

    with np.errstate(divide="ignore"):
        log_lam = np.log(lam)
    g_vals = np.vstack([eval_g(spec, alphas[j], lam) for j in range(n_max + 1)])

    max_violation = 0.0
    observed_b2 = 0.0
    for nu in nus:
        lam_pow = np.ones_like(lam) if nu == 0.0 else np.exp(nu * log_lam)
        lam_pow = np.where(lam > 0, lam_pow, 1.0 if nu == 0.0 else 0.0)
        for j in range(n_max + 1):
            for n in range(j, n_max + 1):
                gap = sums[n + 1] - sums[j]  # s_n - s_{j-1}
                lhs = lam_pow * window_product(j, n + 1)
                bound = gap ** (-nu)
                max_violation = max(max_violation, float(np.max(lhs - bound)))
                val = alphas[j] * gap**nu * lam_pow * g_vals[j] * window_product(j + 1, n + 1)
                observed_b2 = max(observed_b2, float(np.max(val)))
    max_violation = max(max_violation, 0.0)
    grid_desc = f"{lam.size} lambda points on [0,1], nu in {list(map(float, nus))}"
    return FilterBoundReport(
        max_g1_violation=max_violation,
        observed_b2=observed_b2,
        grid=grid_desc,
        schedule_prefix_length=n_max + 1,
    )
