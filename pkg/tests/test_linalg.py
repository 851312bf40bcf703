import numpy as np
import pytest
import scipy.linalg

from git_channel import channel, linalg


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestSolve:
    def test_identity(self):
        v = np.array([1.0 + 2j, -3j, 0.5, 2.0])
        assert np.allclose(linalg.solve(np.eye(4, dtype=complex), v), v)

    def test_diagonal_imaginary(self):
        M = np.diag([2j, 2j, 2j, 2j])
        v = np.ones(4, dtype=complex)
        assert np.allclose(linalg.solve(M, v), v / 2j)

    def test_construct_then_solve_roundtrip(self, rng):
        worst = 0.0
        for _ in range(1000):
            M = random_complex(rng, (4, 4))
            x = random_complex(rng, 4)
            got = linalg.solve(M, M @ x)
            worst = max(worst, float(np.abs(got - x).max() / np.abs(x).max()))
        assert worst <= 1e-12

    def test_residual_bound(self, rng):
        for _ in range(50):
            M = random_complex(rng, (6, 6))
            v = random_complex(rng, 6)
            x = linalg.solve(M, v)
            assert np.linalg.norm(M @ x - v) <= 1e-10 * np.linalg.norm(v)

    def test_matrix_rhs(self, rng):
        M = random_complex(rng, (4, 4))
        B = random_complex(rng, (4, 3))
        X = linalg.solve(M, B)
        assert np.abs(M @ X - B).max() < 1e-12 * np.abs(B).max()

    def test_singular_raises_with_condition(self):
        M = np.zeros((3, 3), dtype=complex)
        with pytest.raises(linalg.SingularMatrixError) as err:
            linalg.solve(M, np.ones(3, dtype=complex))
        assert np.isinf(err.value.condition)

    def test_ill_conditioned_raises(self):
        M = np.diag([1.0, 1e-16]).astype(complex)
        with pytest.raises(linalg.SingularMatrixError) as err:
            linalg.solve(M, np.ones(2, dtype=complex))
        assert err.value.condition > linalg.MAX_CONDITION

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            linalg.solve(np.ones((2, 3)), np.ones(2))


class TestDeterminant:
    def test_identity(self):
        assert linalg.determinant(np.eye(5, dtype=complex)) == 1.0

    def test_diagonal(self):
        M = np.diag([1.0 + 0j, 2.0, 3j, -4.0])
        assert linalg.determinant(M) == pytest.approx(1.0 * 2.0 * 3j * -4.0)

    def test_triangular_exact(self):
        M = np.triu(np.full((4, 4), 2.0 + 1j))
        np.fill_diagonal(M, [1.0, 2.0, 0.5, -3.0])
        assert linalg.determinant(M) == 1.0 * 2.0 * 0.5 * -3.0

    def test_singular_gives_zero(self):
        M = np.ones((3, 3), dtype=complex)
        assert linalg.determinant(M) == 0.0

    def test_drift_matrix_against_eigenvalue_product(self, reference_params):
        A, _ = channel.drift_matrix(reference_params)
        det = linalg.determinant(A)
        oracle = np.prod(np.linalg.eigvals(A))
        assert abs(det - oracle) <= 1e-8 * abs(oracle)

    def test_multiplicative(self, rng):
        for _ in range(200):
            M = random_complex(rng, (4, 4))
            N = random_complex(rng, (4, 4))
            lhs = linalg.determinant(M @ N)
            rhs = linalg.determinant(M) * linalg.determinant(N)
            assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


def random_stable(rng, n):
    """Random Hurwitz matrix: negative-definite symmetric part plus skew part."""
    S = rng.standard_normal((n, n))
    sym = S @ S.T + 0.1 * np.eye(n)
    skew = rng.standard_normal((n, n))
    return -(sym) + (skew - skew.T)


class TestLyapunov:
    def test_scalar_balance(self):
        sigma = linalg.lyapunov_solve(-0.5 * np.eye(3), np.eye(3))
        assert np.allclose(sigma, np.eye(3), atol=1e-12)

    def test_zero_diffusion(self):
        sigma = linalg.lyapunov_solve(-np.eye(4), np.zeros((4, 4)))
        assert np.allclose(sigma, 0.0)

    def test_random_stable_residual_and_structure(self, rng):
        for _ in range(30):
            A = random_stable(rng, 8)
            C = rng.standard_normal((8, 8))
            D = C @ C.T
            sigma = linalg.lyapunov_solve(A, D)
            residual = np.abs(A @ sigma + sigma @ A.T + D).max()
            assert residual <= 1e-10 * np.abs(D).max()
            assert np.abs(sigma - sigma.T).max() <= 1e-12 * np.abs(sigma).max()
            eigs = np.linalg.eigvalsh(sigma)
            assert eigs.min() >= -1e-10 * np.abs(sigma).max()

    def test_against_scipy_oracle(self, rng):
        for _ in range(10):
            A = random_stable(rng, 6)
            C = rng.standard_normal((6, 6))
            D = C @ C.T
            ours = linalg.lyapunov_solve(A, D)
            # scipy solves A X + X A^H = Q
            oracle = scipy.linalg.solve_continuous_lyapunov(A, -D)
            assert np.allclose(ours, oracle, rtol=1e-8, atol=1e-10 * np.abs(D).max())

    def test_non_hurwitz_rejected_with_eigenvalue(self):
        A = np.array([[0.5, 0.0], [0.0, -1.0]])
        with pytest.raises(ValueError, match="Hurwitz"):
            linalg.lyapunov_solve(A, np.eye(2))

    def test_asymmetric_diffusion_rejected(self):
        A = -np.eye(2)
        with pytest.raises(ValueError, match="symmetric"):
            linalg.lyapunov_solve(A, np.array([[1.0, 1.0], [0.0, 1.0]]))
