"""Single-input LCT systems, controllability diagnostics and Grammians."""

from dataclasses import dataclass, field

import numpy as np
import scipy.integrate

from . import numerics
from .errors import DimensionMismatch

#: default rank tolerance, relative to max |P_n|
RANK_RTOL = 1e-9

#: default eigenvalue clustering tolerance, relative to max |lambda|
CLUSTER_RTOL = 1e-6

SPECTRUM_CLASSES = (
    "real-negative-distinct",
    "real-negative-repeated",
    "complex-stable",
    "unstable-or-marginal",
)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LctSystem:
    """``dx/dt = A x + b u`` with a scalar input.

    ``b`` is stored as a 1-D array of length ``n``; an ``(n, 1)`` column is
    accepted, wider input matrices are rejected.
    """

    A: np.ndarray
    b: np.ndarray
    name: str = ""

    def __post_init__(self):
        try:
            A = numerics.as_matrix(self.A, square=True)
        except ValueError as exc:
            raise DimensionMismatch(str(exc)) from exc
        b = np.asarray(self.b, dtype=float)
        if b.ndim == 2 and b.shape[1] == 1:
            b = b[:, 0]
        if b.ndim == 2:
            raise DimensionMismatch(
                f"only single-input systems are supported, B has {b.shape[1]} columns"
            )
        if b.ndim != 1 or b.shape[0] != A.shape[0]:
            raise DimensionMismatch(f"b has shape {b.shape}, expected ({A.shape[0]},)")
        if not np.all(np.isfinite(b)):
            raise DimensionMismatch("b entries must be finite")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))

    @property
    def n(self):
        return self.A.shape[0]

    def transformed(self, W):
        """The system in coordinates ``x = W z``: ``(W^-1 A W, W^-1 b)``."""
        W_inv = numerics.mat_inverse(W)
        return LctSystem(W_inv @ self.A @ W, W_inv @ self.b, name=self.name)


@dataclass(frozen=True)
class SystemDiagnostics:
    controllable: bool
    rank_Pn: int
    spectrum: np.ndarray
    spectrum_class: str
    rank_tol: float
    clusters: list = field(default_factory=list)


def controllability_matrix(sys):
    """``P_n = [b, Ab, ..., A^(n-1) b]``."""
    cols = [sys.b]
    for _ in range(sys.n - 1):
        cols.append(sys.A @ cols[-1])
    return np.column_stack(cols)


def matrix_rank(M, tol):
    """Rank by Gaussian elimination with complete pivoting.

    Elimination stops once the largest remaining entry is ``<= tol``.
    """
    M = np.array(M, dtype=float)
    rows, cols = M.shape
    rank = 0
    for k in range(min(rows, cols)):
        sub = np.abs(M[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol:
            break
        M[[k, k + i]] = M[[k + i, k]]
        M[:, [k, k + j]] = M[:, [k + j, k]]
        M[k + 1:, k:] -= np.outer(M[k + 1:, k] / M[k, k], M[k, k:])
        rank += 1
    return rank


def classify_spectrum(spectrum, tol_cluster=None):
    from .canonical import cluster_eigenvalues

    spectrum = np.asarray(spectrum, dtype=complex)
    scale = np.max(np.abs(spectrum), initial=0.0)
    if tol_cluster is None:
        tol_cluster = CLUSTER_RTOL * scale
    if np.any(spectrum.real >= -tol_cluster) or scale == 0.0:
        return "unstable-or-marginal", []
    if np.any(np.abs(spectrum.imag) > tol_cluster):
        return "complex-stable", []
    clusters = cluster_eigenvalues(spectrum, tol_cluster)
    if any(m > 1 for _, m in clusters):
        return "real-negative-repeated", clusters
    return "real-negative-distinct", clusters


def diagnose(sys, tol=None, tol_cluster=None):
    """Controllability rank and spectrum classification.

    ``tol`` defaults to ``RANK_RTOL * max|P_n|``; it is reported back so that
    callers can audit the rank decision.
    """
    Pn = controllability_matrix(sys)
    if tol is None:
        tol = RANK_RTOL * np.max(np.abs(Pn), initial=0.0)
    rank = matrix_rank(Pn, tol)
    spectrum = numerics.eigenvalues(sys.A)
    cls, clusters = classify_spectrum(spectrum, tol_cluster)
    return SystemDiagnostics(
        controllable=rank == sys.n,
        rank_Pn=rank,
        spectrum=spectrum,
        spectrum_class=cls,
        rank_tol=float(tol),
        clusters=clusters,
    )


def grammian_infinite(sys):
    """Infinite-horizon controllability Grammian, from the Lyapunov equation."""
    return numerics.lyapunov_solve(sys.A, np.outer(sys.b, sys.b))


def grammian_finite(sys, T, steps=200):
    """``int_0^T e^(At) b b^T e^(A^T t) dt`` by composite Simpson quadrature."""
    if T <= 0:
        raise ValueError("horizon T must be positive")
    if steps < 2:
        raise ValueError("need at least 2 quadrature steps")
    t = np.linspace(0.0, T, steps + 1)
    step = numerics.expm(sys.A * (T / steps))
    x = np.empty((steps + 1, sys.n))
    x[0] = sys.b
    for k in range(steps):
        x[k + 1] = step @ x[k]
    integrand = x[:, :, None] * x[:, None, :]
    G = scipy.integrate.simpson(integrand, x=t, axis=0)
    return 0.5 * (G + G.T)
