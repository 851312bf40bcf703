"""Dense linear algebra for the small complex systems used throughout the package.

Everything here operates on plain numpy arrays of fixed, tiny dimension
(n <= 16): an LU solver with partial pivoting, an LU determinant, and a
continuous Lyapunov solver via Kronecker vectorization.  Direct dense methods
are deliberate; no sparse or iterative machinery is warranted at this scale.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SingularMatrixError",
    "MAX_CONDITION",
    "solve",
    "determinant",
    "condition_estimate",
    "lyapunov_solve",
]

MAX_CONDITION = 1e14


class SingularMatrixError(ValueError):
    """Raised when a linear system is singular or numerically unusable.

    The ``condition`` attribute carries the 1-norm condition estimate (inf for
    an exactly singular matrix).
    """

    def __init__(self, message, condition=np.inf):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


def _as_square(M):
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A.view(float) if A.dtype.kind == "c" else A)):
        raise ValueError("matrix entries must be finite")
    dtype = np.complex128 if A.dtype.kind == "c" else np.float64
    return A.astype(dtype, copy=True)


def _lu_factor(A):
    """In-place partial-pivoting LU; returns (LU, row permutation, sign).

    Returns sign = 0.0 if a zero pivot is hit (exactly singular matrix); the
    factorization is then valid only up to the offending column.
    """
    n = A.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if A[p, k] == 0:
            return A, perm, 0.0
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        A[k + 1:, k] /= A[k, k]
        if k + 1 < n:
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return A, perm, sign


def _lu_solve(LU, perm, b):
    """Solve with a prepared factorization; ``b`` may hold multiple columns."""
    x = np.asarray(b, dtype=LU.dtype)[perm].copy()
    n = LU.shape[0]
    for k in range(1, n):          # forward substitution, unit lower triangle
        x[k] -= LU[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):  # back substitution
        if k + 1 < n:
            x[k] -= LU[k, k + 1:] @ x[k + 1:]
        x[k] /= LU[k, k]
    return x


def _condition_from_factors(A, LU, perm):
    norm = np.abs(A).sum(axis=0).max()
    inv = _lu_solve(LU, perm, np.eye(A.shape[0], dtype=LU.dtype))
    inv_norm = np.abs(inv).sum(axis=0).max()
    return norm * inv_norm


def condition_estimate(M):
    """1-norm condition number ||M||_1 * ||M^-1||_1 (inf if singular)."""
    A = _as_square(M)
    LU, perm, sign = _lu_factor(A.copy())
    if sign == 0.0:
        return np.inf
    return _condition_from_factors(A, LU, perm)


def solve(M, b, refine=0):
    """Solve ``M x = b`` by partial-pivoting LU.

    Parameters
    ----------
    M : (n, n) array_like
        Square, nonsingular matrix with condition estimate below
        ``MAX_CONDITION``.
    b : (n,) or (n, m) array_like
        Right-hand side(s).
    refine : int
        Number of iterative-refinement steps; residuals are accumulated in
        extended precision, which sharpens the forward error of marginally
        conditioned systems without changing the method.

    Raises
    ------
    SingularMatrixError
        If the matrix is singular or its condition estimate exceeds the
        threshold.
    """
    A = _as_square(M)
    LU, perm, sign = _lu_factor(A.copy())
    if sign == 0.0:
        raise SingularMatrixError("matrix is singular", condition=np.inf)
    cond = _condition_from_factors(A, LU, perm)
    if cond > MAX_CONDITION:
        raise SingularMatrixError("matrix is too ill-conditioned", condition=cond)
    rhs = np.asarray(b, dtype=LU.dtype)
    x = _lu_solve(LU, perm, rhs)
    if refine > 0:
        wide = np.clongdouble if LU.dtype.kind == "c" else np.longdouble
        A_w = A.astype(wide)
        b_w = rhs.astype(wide)
        for _ in range(refine):
            residual = b_w - A_w @ x.astype(wide)
            x = x + _lu_solve(LU, perm, residual.astype(LU.dtype))
    return x


def determinant(M):
    """Determinant via LU; exact for triangular input, 0.0 for singular input."""
    A = _as_square(M)
    LU, _, sign = _lu_factor(A)
    if sign == 0.0:
        return type(LU[0, 0].item())(0)
    return (sign * np.prod(np.diag(LU))).item()


def lyapunov_solve(A, D, psd_tol=1e-10):
    """Steady-state covariance: solve A S + S A^T + D = 0 for symmetric S.

    Parameters
    ----------
    A : (n, n) real array_like
        Drift matrix; every eigenvalue must have a strictly negative real part.
    D : (n, n) real array_like
        Symmetric positive-semidefinite diffusion matrix.

    Notes
    -----
    The equation is vectorized through Kronecker products into an n^2-dim
    linear system and handed to :func:`solve`; the result is symmetrized to
    remove roundoff skew.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if A.shape != D.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A and D must be square matrices of equal shape")
    eigs = np.linalg.eigvals(A)
    worst = eigs[np.argmax(eigs.real)]
    if worst.real >= 0:
        raise ValueError(
            f"drift matrix is not Hurwitz: eigenvalue {worst} has Re >= 0")
    if not np.allclose(D, D.T, rtol=0.0, atol=psd_tol * max(1.0, np.abs(D).max())):
        raise ValueError("diffusion matrix must be symmetric")
    if np.linalg.eigvalsh((D + D.T) / 2.0).min() < -psd_tol * max(1.0, np.abs(D).max()):
        raise ValueError("diffusion matrix must be positive semidefinite")
    n = A.shape[0]
    eye = np.eye(n)
    K = np.kron(eye, A) + np.kron(A, eye)
    # column-major vec: vec(A S) = (I (x) A) vec(S), vec(S A^T) = (A (x) I) vec(S)
    sigma = solve(K, -D.flatten(order="F"), refine=1).reshape((n, n), order="F")
    return (sigma + sigma.T) / 2.0
