import numpy as np
import pytest

from newtonreg import bvp
from newtonreg.errors import AsymmetricMatrixError, SingularSystemError
from newtonreg.linalg import (
    TridiagonalSystem,
    estimate_operator_norm,
    solve_tridiagonal,
    sym_eigen,
)


class TestSolveTridiagonal:
    def test_identity(self):
        sys = TridiagonalSystem(sub=np.zeros(1), main=np.ones(2), sup=np.zeros(1))
        np.testing.assert_allclose(solve_tridiagonal(sys, np.array([3.0, 5.0])), [3.0, 5.0])

    def test_laplacian_m3_matches_dense_lu(self):
        h = 1.0 / 4
        off = np.full(2, -1.0 / h**2)
        sys = TridiagonalSystem(sub=off, main=np.full(3, 2.0 / h**2), sup=off)
        rhs = np.ones(3)
        x = solve_tridiagonal(sys, rhs)
        x_dense = np.linalg.solve(sys.to_dense(), rhs)
        np.testing.assert_allclose(x, x_dense, rtol=1e-12)

    def test_boundary_lift_constant_solution(self):
        # -u'' = 0 with u(0) = u(1) = 1 folded into the rhs gives u = 1
        m = 100
        h = 1.0 / (m + 1)
        off = np.full(m - 1, -1.0 / h**2)
        sys = TridiagonalSystem(sub=off, main=np.full(m, 2.0 / h**2), sup=off)
        rhs = np.zeros(m)
        rhs[0] += 1.0 / h**2
        rhs[-1] += 1.0 / h**2
        np.testing.assert_allclose(solve_tridiagonal(sys, rhs), np.ones(m), rtol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_agrees_with_dense_lu_on_random_systems(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 51))
        sub = rng.standard_normal(n - 1)
        sup = rng.standard_normal(n - 1)
        main = np.abs(rng.standard_normal(n)) + 3.0  # diagonally dominant
        sys = TridiagonalSystem(sub=sub, main=main, sup=sup)
        rhs = rng.standard_normal(n)
        x = solve_tridiagonal(sys, rhs)
        x_dense = np.linalg.solve(sys.to_dense(), rhs)
        assert np.linalg.norm(x - x_dense) <= 1e-10 * np.linalg.norm(x_dense)

    def test_relative_residual(self):
        rng = np.random.default_rng(7)
        n = 40
        sys = TridiagonalSystem(sub=rng.standard_normal(n - 1),
                                main=np.abs(rng.standard_normal(n)) + 3.0,
                                sup=rng.standard_normal(n - 1))
        rhs = rng.standard_normal(n)
        x = solve_tridiagonal(sys, rhs)
        resid = sys.matvec(x) - rhs
        assert np.linalg.norm(resid) <= 1e-12 * np.linalg.norm(rhs)

    def test_singular_system_raises(self):
        sys = TridiagonalSystem(sub=np.array([1.0]), main=np.array([1.0, 1.0]),
                                sup=np.array([1.0]))  # det = 0
        with pytest.raises(SingularSystemError):
            solve_tridiagonal(sys, np.array([1.0, 0.0]))

    def test_matrix_rhs(self):
        rng = np.random.default_rng(3)
        n = 10
        sys = TridiagonalSystem(sub=rng.standard_normal(n - 1),
                                main=np.abs(rng.standard_normal(n)) + 3.0,
                                sup=rng.standard_normal(n - 1))
        rhs = rng.standard_normal((n, 4))
        x = solve_tridiagonal(sys, rhs)
        np.testing.assert_allclose(x, np.linalg.solve(sys.to_dense(), rhs), rtol=1e-10,
                                   atol=1e-12)

    def test_size_mismatch_raises(self):
        sys = TridiagonalSystem(sub=np.zeros(1), main=np.ones(2), sup=np.zeros(1))
        with pytest.raises(ValueError):
            solve_tridiagonal(sys, np.ones(3))


class TestSymEigen:
    def test_diagonal(self):
        dec = sym_eigen(np.diag([4.0, 1.0]))
        np.testing.assert_allclose(dec.eigenvalues, [4.0, 1.0])
        np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(2), atol=1e-14)

    def test_two_by_two(self):
        dec = sym_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(dec.eigenvalues, [3.0, 1.0], rtol=1e-14)

    def test_reconstruction_random(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((20, 20))
        m = a + a.T
        dec = sym_eigen(m)
        assert np.linalg.norm(dec.reconstruct() - m) <= 1e-10 * np.linalg.norm(m)
        q = dec.eigenvectors
        assert np.linalg.norm(q.T @ q - np.eye(20)) <= 1e-10

    def test_eigenvalue_sum_equals_trace(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((30, 30))
        m = a + a.T
        dec = sym_eigen(m)
        assert abs(dec.eigenvalues.sum() - np.trace(m)) <= 1e-10 * abs(np.trace(m))

    def test_sorted_nonincreasing(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((15, 15))
        dec = sym_eigen(a + a.T)
        assert np.all(np.diff(dec.eigenvalues) <= 0)

    def test_asymmetric_raises(self):
        with pytest.raises(AsymmetricMatrixError):
            sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestEstimateOperatorNorm:
    def test_diagonal(self):
        d = np.array([0.5, 0.2])
        est = estimate_operator_norm(lambda v: d * v, lambda v: d * v, 2)
        assert est.converged
        assert abs(est.value - 0.5) <= 0.01 * 0.5

    def test_zero_operator(self):
        est = estimate_operator_norm(lambda v: 0.0 * v, lambda v: 0.0 * v, 4)
        assert est.value == 0.0
        assert est.converged

    def test_adjoint_swap_invariance(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((12, 12))
        fwd = estimate_operator_norm(lambda v: a @ v, lambda v: a.T @ v, 12)
        swp = estimate_operator_norm(lambda v: a.T @ v, lambda v: a @ v, 12)
        assert abs(fwd.value - swp.value) <= 0.01 * fwd.value

    def test_reference_derivative_vs_dense_svd(self):
        m = 50
        problem = bvp.make_reference_problem(m)
        c = bvp.true_coefficient(m)
        jac = problem.jacobian_matrix(c)
        exact = np.linalg.norm(jac, 2)
        est = estimate_operator_norm(
            lambda h: problem.derivative_apply(c, h),
            lambda w: problem.adjoint_apply(c, w),
            m,
        )
        assert abs(est.value - exact) <= 0.01 * exact
