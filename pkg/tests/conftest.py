import numpy as np
import pytest

from newtonreg.newton import InverseProblem


class LinearMatrixProblem(InverseProblem):
    """F(x) = T x for a dense T, Euclidean inner products."""

    def __init__(self, t_matrix):
        t_matrix = np.asarray(t_matrix, dtype=float)
        super().__init__(model_dim=t_matrix.shape[1], data_dim=t_matrix.shape[0])
        self.t_matrix = t_matrix

    def evaluate(self, x):
        return self.t_matrix @ x

    def derivative_apply(self, x, h):
        return self.t_matrix @ h

    def adjoint_apply(self, x, w):
        return self.t_matrix.T @ w

    def jacobian_matrix(self, x):
        return self.t_matrix


@pytest.fixture
def diag_problem():
    return LinearMatrixProblem(np.diag([0.9, 0.5, 0.1]))


def random_contraction(rng, n, norm=0.9):
    k = rng.standard_normal((n, n))
    return k * (norm / np.linalg.norm(k, 2))
