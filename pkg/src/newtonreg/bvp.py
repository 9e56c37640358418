"""Coefficient identification for -u'' + c u = f on (0, 1).

The forward map sends the coefficient c (on m interior nodes of a uniform
grid) to the Dirichlet solution u(c) of the two-point boundary value
problem, discretized with the classical second-order three-point stencil.
Boundary values are folded into the right-hand side, so model and data
vectors both live on the interior nodes.  Derivative and adjoint are one
tridiagonal solve each:

    F'(c) h  = -A(c)^{-1} (h * u(c)),
    F'(c)* w = -u(c) * A(c)^{-1} w,

where A(c) v = -v'' + c v with homogeneous Dirichlet conditions.  All
norms downstream use the h-weighted discrete L^2 inner product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .linalg import TridiagonalSystem, solve_tridiagonal
from .newton import InverseProblem

JACOBIAN_SIZE_CAP = 512


@dataclass(frozen=True)
class BvpSpec:
    """Grid and data defining one boundary value problem."""

    m: int = 100
    f: Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float] = 0.0
    g0: float = 0.0
    g1: float = 0.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least 2 interior nodes")

    @property
    def h(self) -> float:
        return 1.0 / (self.m + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior nodes t_i = i*h, i = 1..m."""
        return np.arange(1, self.m + 1) * self.h

    def f_values(self) -> np.ndarray:
        if callable(self.f):
            return np.asarray(self.f(self.nodes), dtype=float)
        return np.broadcast_to(np.asarray(self.f, dtype=float), (self.m,)).astype(float)


def _system(spec: BvpSpec, c: np.ndarray) -> TridiagonalSystem:
    h2 = spec.h**2
    off = np.full(spec.m - 1, -1.0 / h2)
    return TridiagonalSystem(sub=off, main=2.0 / h2 + c, sup=off)


def forward(spec: BvpSpec, c: np.ndarray) -> np.ndarray:
    """Solve -u'' + c u = f with u(0)=g0, u(1)=g1; values on interior nodes."""
    c = np.asarray(c, dtype=float)
    rhs = spec.f_values().copy()
    rhs[0] += spec.g0 / spec.h**2
    rhs[-1] += spec.g1 / spec.h**2
    return solve_tridiagonal(_system(spec, c), rhs)


def derivative_apply(spec: BvpSpec, c: np.ndarray, u_c: np.ndarray, hdir: np.ndarray) -> np.ndarray:
    """F'(c) hdir, given the cached state u_c = forward(spec, c)."""
    return solve_tridiagonal(_system(spec, np.asarray(c, dtype=float)),
                             -np.asarray(hdir, dtype=float) * u_c)


def adjoint_apply(spec: BvpSpec, c: np.ndarray, u_c: np.ndarray, w: np.ndarray) -> np.ndarray:
    """F'(c)* w in the h-weighted inner product (A(c) is symmetric)."""
    return -u_c * solve_tridiagonal(_system(spec, np.asarray(c, dtype=float)),
                                    np.asarray(w, dtype=float))


def materialize_jacobian(spec: BvpSpec, c: np.ndarray) -> np.ndarray:
    """Dense F'(c): column j is the derivative on the j-th unit direction."""
    if spec.m > JACOBIAN_SIZE_CAP:
        raise ValueError(f"jacobian materialization capped at m={JACOBIAN_SIZE_CAP}")
    c = np.asarray(c, dtype=float)
    u_c = forward(spec, c)
    return solve_tridiagonal(_system(spec, c), -np.diag(u_c))


class BvpProblem(InverseProblem):
    """The parameter-to-solution map as an inverse problem."""

    def __init__(self, spec: BvpSpec):
        self.spec = spec
        self._state_key: Optional[bytes] = None
        self._state: Optional[np.ndarray] = None
        w = spec.h
        super().__init__(model_dim=spec.m, data_dim=spec.m, weight_x=w, weight_y=w)

    def _u(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        key = c.tobytes()
        if key != self._state_key:
            self._state = forward(self.spec, c)
            self._state_key = key
        return self._state

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self._u(x)

    def derivative_apply(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        return derivative_apply(self.spec, x, self._u(x), h)

    def adjoint_apply(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        return adjoint_apply(self.spec, x, self._u(x), w)

    def in_domain(self, x: np.ndarray) -> bool:
        return bool(np.all(np.isfinite(x)))

    def jacobian_matrix(self, x: np.ndarray) -> np.ndarray:
        return materialize_jacobian(self.spec, np.asarray(x, dtype=float))


# --- the reference coefficient-identification setup ---------------------


def reference_coefficient(t: np.ndarray) -> np.ndarray:
    """The sought coefficient 1 + t - 0.8 sin(2 pi t)."""
    return 1.0 + t - 0.8 * np.sin(2.0 * np.pi * t)


def reference_state(t: np.ndarray) -> np.ndarray:
    """Exact state u = 1 + t for the reference coefficient."""
    return 1.0 + t


def make_reference_problem(m: int = 100) -> BvpProblem:
    """Problem with f = (1+t)*(1+t-0.8 sin(2 pi t)), u(0)=1, u(1)=2."""
    spec = BvpSpec(
        m=m,
        f=lambda t: (1.0 + t) * reference_coefficient(t),
        g0=1.0,
        g1=2.0,
    )
    return BvpProblem(spec)


def true_coefficient(m: int = 100) -> np.ndarray:
    return reference_coefficient(BvpSpec(m=m).nodes)


def initial_guess_smooth(m: int = 100) -> np.ndarray:
    """c_0 = 1 + t: the initial error has a source representation."""
    return 1.0 + BvpSpec(m=m).nodes


def initial_guess_rough(m: int = 100) -> np.ndarray:
    """c_0 = 2 - t: the initial error has no source representation."""
    return 2.0 - BvpSpec(m=m).nodes
