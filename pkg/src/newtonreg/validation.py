"""Consistency checks for user-supplied inverse problems."""

from __future__ import annotations

import numpy as np

from .newton import InverseProblem


def adjoint_defect(
    problem: InverseProblem,
    x: np.ndarray,
    n_trials: int = 100,
    seed: int = 0,
) -> float:
    """Largest normalized mismatch |<Kh, w> - <h, K*w>| over random (h, w).

    The mismatch is scaled by ||h|| ||w|| (weighted norms); a correct
    adjoint pair stays near machine precision.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_trials):
        h = rng.standard_normal(problem.model_dim)
        w = rng.standard_normal(problem.data_dim)
        lhs = problem.inner_y(problem.derivative_apply(x, h), w)
        rhs = problem.inner_x(h, problem.adjoint_apply(x, w))
        scale = problem.norm_x(h) * problem.norm_y(w)
        if scale > 0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def finite_difference_defect(
    problem: InverseProblem,
    x: np.ndarray,
    eps: float = 1e-4,
    n_trials: int = 20,
    seed: int = 0,
) -> float:
    """Largest relative gap between a central difference and the derivative action."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    x = np.asarray(x, dtype=float)
    for _ in range(n_trials):
        h = rng.standard_normal(problem.model_dim)
        fd = (problem.evaluate(x + eps * h) - problem.evaluate(x - eps * h)) / (2 * eps)
        exact = problem.derivative_apply(x, h)
        denom = problem.norm_y(exact)
        if denom > 0:
            worst = max(worst, problem.norm_y(fd - exact) / denom)
    return worst
