"""Small dense and tridiagonal linear-algebra kernels.

Everything here is deliberately boring: a banded solve, a symmetric
eigendecomposition used as an exact oracle for spectral filter
application, and a power-iteration estimate of an operator norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class TridiagonalSystem:
    """Tridiagonal matrix stored as its three diagonals.

    ``main`` has length n, ``sub`` and ``sup`` length n-1.
    """

    sub: np.ndarray
    main: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        sub = np.asarray(self.sub, dtype=float)
        main = np.asarray(self.main, dtype=float)
        sup = np.asarray(self.sup, dtype=float)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "main", main)
        object.__setattr__(self, "sup", sup)
        n = main.shape[0]
        if n < 1:
            raise ValueError("main diagonal must have length >= 1")
        if sub.shape != (max(n - 1, 0),) or sup.shape != (max(n - 1, 0),):
            raise ValueError("sub/super diagonals must have length n-1")
        for d in (sub, main, sup):
            if not np.all(np.isfinite(d)):
                raise ValueError("diagonals must be finite")

    @property
    def n(self) -> int:
        return self.main.shape[0]

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.main)
        if self.n > 1:
            a += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            y = self.main * x
            if self.n > 1:
                y[1:] += self.sub * x[:-1]
                y[:-1] += self.sup * x[1:]
            return y
        # matrix right-hand side, columns are vectors
        y = self.main[:, None] * x
        if self.n > 1:
            y[1:] += self.sub[:, None] * x[:-1]
            y[:-1] += self.sup[:, None] * x[1:]
        return y


def solve_tridiagonal(sys: TridiagonalSystem, rhs: np.ndarray) -> np.ndarray:
    """Solve ``sys @ x = rhs`` (vector or matrix right-hand side).

    Raises :class:`SingularSystemError` when the factorization hits a zero
    pivot or the computed solution fails a cheap residual check.
    """
    from .errors import SingularSystemError

    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != sys.n:
        raise ValueError("rhs size does not match system size")
    ab = np.zeros((3, sys.n))
    ab[1] = sys.main
    if sys.n > 1:
        ab[0, 1:] = sys.sup
        ab[2, :-1] = sys.sub
    try:
        x = scipy.linalg.solve_banded((1, 1), ab, rhs)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"tridiagonal solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("tridiagonal solve produced non-finite values")
    # near-singular systems can slip past the pivot check
    resid = sys.matvec(x) - rhs
    scale = np.linalg.norm(rhs) + np.linalg.norm(x) * np.abs(sys.main).max()
    if scale > 0 and np.linalg.norm(resid) > 1e-8 * scale:
        raise SingularSystemError("tridiagonal solve residual too large; system near-singular")
    return x


@dataclass(frozen=True)
class SymmetricEigenDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues nonincreasing."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]

    def reconstruct(self) -> np.ndarray:
        q, lam = self.eigenvectors, self.eigenvalues
        return (q * lam) @ q.T


def sym_eigen(m: np.ndarray, sym_tol: float = 1e-12) -> SymmetricEigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues sorted descending."""
    from .errors import AsymmetricMatrixError

    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, np.abs(m).max()) if m.size else 1.0
    if np.abs(m - m.T).max(initial=0.0) > sym_tol * scale:
        raise AsymmetricMatrixError("matrix is not symmetric within tolerance")
    lam, q = np.linalg.eigh(0.5 * (m + m.T))
    return SymmetricEigenDecomposition(eigenvalues=lam[::-1].copy(), eigenvectors=q[:, ::-1].copy())


class OperatorNormEstimate(NamedTuple):
    value: float
    converged: bool
    iterations: int


def estimate_operator_norm(
    apply_op: Callable[[np.ndarray], np.ndarray],
    apply_adjoint: Callable[[np.ndarray], np.ndarray],
    dim_in: int,
    rel_tol: float = 1e-6,
    min_iters: int = 50,
    max_iters: int = 500,
    seed: int = 0,
) -> OperatorNormEstimate:
    """Largest singular value of a linear action, by power iteration on A*A.

    Runs at least ``min_iters`` iterations unless the Rayleigh estimate has
    stabilized to ``rel_tol``; an estimate that never stabilizes within
    ``max_iters`` is returned with ``converged=False``.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim_in)
    nv = np.linalg.norm(v)
    while nv == 0.0:  # pragma: no cover - probability zero
        v = rng.standard_normal(dim_in)
        nv = np.linalg.norm(v)
    v /= nv
    est_prev = None
    for it in range(1, max_iters + 1):
        w = apply_adjoint(apply_op(v))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return OperatorNormEstimate(0.0, True, it)
        est = float(np.sqrt(nw))
        v = w / nw
        if est_prev is not None and abs(est - est_prev) <= rel_tol * est:
            if it >= min_iters or abs(est - est_prev) == 0.0:
                return OperatorNormEstimate(est, True, it)
        est_prev = est
    return OperatorNormEstimate(est_prev, False, max_iters)
