"""Dense real-matrix kernels.

Matrices are plain ``float64`` ndarrays; polynomials are 1-D coefficient
arrays ``[1, a1, ..., an]`` of the monic polynomial ``s^n + a1 s^(n-1) + ... + an``.
LAPACK (through scipy) does the factorizations; the characteristic polynomial
is computed by the Faddeev-LeVerrier trace recursion so that callers can get
coefficients without an eigensolve.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import NoConvergence, SingularMatrix, UnstableSystem

#: relative pivot threshold, scaled by the largest row norm
SINGULAR_RTOL = 1e-12

#: largest dimension solved by Kronecker vectorization
KRONECKER_MAX_N = 64


def as_matrix(M, square=False):
    """Validate and convert to a finite 2-D float array."""
    M = np.array(M, dtype=float, ndmin=2)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def as_polynomial(p):
    """Validate a monic coefficient vector ``[1, a1, ..., an]``."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("polynomial must be a non-empty 1-D coefficient array")
    if p[0] != 1.0:
        raise ValueError(f"polynomial must be monic, leading coefficient is {p[0]}")
    if not np.all(np.isfinite(p)):
        raise ValueError("polynomial coefficients must be finite")
    return p


def _pivot_floor(M):
    return SINGULAR_RTOL * np.max(np.sum(np.abs(M), axis=1), initial=0.0)


def _lu(M):
    with warnings.catch_warnings():
        # exact zero pivots are handled by the callers
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    return lu, piv, -1.0 if swaps % 2 else 1.0


def lu_det(M):
    """Determinant by row-pivoted LU; numerically singular input gives 0.0."""
    M = as_matrix(M, square=True)
    if M.size == 0:
        return 1.0
    lu, _, sign = _lu(M)
    d = np.diag(lu)
    if np.min(np.abs(d)) <= _pivot_floor(M):
        return 0.0
    return float(sign * np.prod(d))


def lu_slogdet(M):
    """Return ``(sign, log|det M|)`` from the same LU, safe against overflow.

    No singularity threshold is applied here: an exactly zero pivot gives
    ``(0.0, -inf)``, anything else is trusted.
    """
    M = as_matrix(M, square=True)
    if M.size == 0:
        return 1.0, 0.0
    lu, _, sign = _lu(M)
    d = np.diag(lu)
    if np.any(d == 0.0):
        return 0.0, -np.inf
    sign *= np.prod(np.sign(d))
    return float(sign), float(np.sum(np.log(np.abs(d))))


def det_from_slogdet(sign, logabs):
    """``sign * exp(logabs)``, saturating to ``+-inf`` instead of overflowing."""
    if logabs > 709.0:
        return sign * np.inf
    return float(sign * np.exp(logabs))


def mat_inverse(M):
    """Inverse via LU; raises :class:`SingularMatrix` below the pivot threshold."""
    M = as_matrix(M, square=True)
    lu, piv, _ = _lu(M)
    if np.min(np.abs(np.diag(lu))) <= _pivot_floor(M):
        raise SingularMatrix("pivot below singularity threshold")
    return scipy.linalg.lu_solve((lu, piv), np.eye(M.shape[0]), check_finite=False)


def eigenvalues(M):
    """All eigenvalues of a real square matrix, as a complex array (unordered)."""
    M = as_matrix(M, square=True)
    try:
        return np.linalg.eigvals(M).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def char_poly(M):
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion.

    Returns ``[1, a1, ..., an]`` with ``det(sI - M) = s^n + a1 s^(n-1) + ... + an``.
    """
    M = as_matrix(M, square=True)
    n = M.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    N = np.eye(n)
    for k in range(1, n + 1):
        MN = M @ N
        coeffs[k] = -np.trace(MN) / k
        N = MN + coeffs[k] * np.eye(n)
    return coeffs


def poly_from_roots(roots):
    """Monic polynomial with the given roots, by sequential convolution.

    Complex roots must come in conjugate pairs; the imaginary residue is dropped.
    """
    p = np.array([1.0 + 0j])
    for r in np.atleast_1d(roots):
        p = np.convolve(p, [1.0, -r])
    return p.real.copy()


def expm(M):
    """Matrix exponential (scipy's Pade scaling-and-squaring)."""
    return scipy.linalg.expm(as_matrix(M, square=True))


def is_stable_spectrum(M, margin=0.0):
    return bool(np.all(eigenvalues(M).real < -margin))


def lyapunov_solve(A, Q):
    """Solve ``A G + G A^T + Q = 0`` for a Hurwitz-stable ``A``.

    Small systems are solved by Kronecker vectorization; larger ones fall back
    to Bartels-Stewart. The result is symmetrized.
    """
    A = as_matrix(A, square=True)
    Q = as_matrix(Q, square=True)
    n = A.shape[0]
    if Q.shape != A.shape:
        raise ValueError(f"Q has shape {Q.shape}, expected {A.shape}")
    if not is_stable_spectrum(A):
        raise UnstableSystem("state matrix has an eigenvalue with nonnegative real part")
    if n <= KRONECKER_MAX_N:
        eye = np.eye(n)
        K = np.kron(A, eye) + np.kron(eye, A)
        G = np.linalg.solve(K, -Q.reshape(-1)).reshape(n, n)
    else:
        G = scipy.linalg.solve_continuous_lyapunov(A, -Q)
    return 0.5 * (G + G.T)
