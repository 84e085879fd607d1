"""Controllable canonical form and Jordan-route eigenstructure.

The Jordan data are built from the companion form only: Vandermonde columns
for simple eigenvalues and scaled derivative chains for repeated ones. No
numerical Jordan decomposition of a general matrix is attempted.
"""

from dataclasses import dataclass
from math import comb

import mpmath
import numpy as np

from . import numerics
from .errors import ComplexSpectrum, IllConditioned, NotControllable, SingularMatrix
from .system import CLUSTER_RTOL, RANK_RTOL, controllability_matrix, matrix_rank

#: condition-number ceiling for the controllability matrix
COND_LIMIT = 1e12

#: relative tolerance for the similarity round-trip check
VERIFY_RTOL = 1e-8

#: largest n whose transform determinant is evaluated in extended precision
EXTENDED_DET_MAX_N = 12

#: working digits for that evaluation
EXTENDED_DET_DPS = 34


@dataclass(frozen=True)
class CcfData:
    """State transform ``x = W_c x_c`` into controllable canonical form.

    ``a`` holds ``[a1, ..., an]``; the companion matrix ``A_c`` has ones on the
    superdiagonal and last row ``[-an, ..., -a1]``. ``cond_Pn`` is the 1-norm
    condition estimate of the controllability matrix (``inf`` when unchecked).
    """

    W_c: np.ndarray
    det_Wc: float
    log_abs_det_Wc: float
    A_c: np.ndarray
    B_c: np.ndarray
    a: np.ndarray
    cond_Pn: float = float("inf")

    @property
    def n(self):
        return self.A_c.shape[0]


def companion(a):
    """Companion matrix of ``s^n + a1 s^(n-1) + ... + an`` in CCF layout."""
    a = np.asarray(a, dtype=float)
    n = a.size
    A_c = np.eye(n, k=1)
    A_c[-1, :] = -a[::-1]
    return A_c


def _krylov_slogdet_mp(A, b, dps=EXTENDED_DET_DPS):
    """``(sign, log|det P_n|)`` with ``P_n`` formed and factorized in mpmath.

    In float64 the Krylov columns ``A^k b`` each pick up independent rounding
    that the determinant amplifies by ``cond(P_n)``; at ``dps`` digits that
    error drops far below double precision.
    """
    n = b.size
    with mpmath.workdps(dps):
        Am = mpmath.matrix(A.tolist())
        col = mpmath.matrix(b.tolist())
        P = mpmath.matrix(n, n)
        for j in range(n):
            for i in range(n):
                P[i, j] = col[i]
            col = Am * col
        det = mpmath.det(P)
        if det == 0:
            return 0.0, -np.inf
        return (1.0 if det > 0 else -1.0), float(mpmath.log(abs(det)))


def to_ccf(sys, strict=True, cond_limit=COND_LIMIT):
    """Transform a controllable single-input system to canonical form.

    With ``strict=True`` the controllability rank, the conditioning of ``P_n``
    and the round trip ``W_c^-1 A W_c = A_c`` are all checked. ``strict=False``
    skips every guard and uses raw LAPACK solves; the benchmark harness uses it
    to push to dimensions where ``P_n`` is numerically singular.

    ``W_c^-1 P_n`` is a Hankel matrix with zeros above the anti-diagonal and
    ones on it, so ``det W_c = (-1)^(n(n-1)/2) det P_n``. In strict mode, up to
    ``EXTENDED_DET_MAX_N`` states, ``det W_c`` is taken from that identity in
    extended precision rather than from the float64 inverse of ``T``.
    """
    n = sys.n
    Pn = controllability_matrix(sys)
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    cond = float("inf")
    if strict:
        tol = RANK_RTOL * np.max(np.abs(Pn), initial=0.0)
        if matrix_rank(Pn, tol) < n:
            raise NotControllable("controllability matrix is rank deficient")
        try:
            Pn_inv = numerics.mat_inverse(Pn)
        except SingularMatrix as exc:
            raise NotControllable(str(exc)) from exc
        cond = float(np.linalg.norm(Pn, 1) * np.linalg.norm(Pn_inv, 1))
        if cond > cond_limit:
            raise IllConditioned(f"cond(P_n) ~ {cond:.3g} exceeds {cond_limit:.3g}")
        w1 = Pn_inv[-1]
    else:
        w1 = np.linalg.solve(Pn.T, e_n)

    rows = [w1]
    for _ in range(n - 1):
        rows.append(rows[-1] @ sys.A)
    T = np.vstack(rows)
    W_c = numerics.mat_inverse(T) if strict else np.linalg.inv(T)

    a = numerics.char_poly(sys.A)[1:]
    A_c = companion(a)
    if strict:
        scale = max(1.0, np.max(np.abs(A_c)))
        err_A = np.max(np.abs(T @ sys.A @ W_c - A_c)) / scale
        err_b = np.max(np.abs(T @ sys.b - e_n))
        if err_A > VERIFY_RTOL or err_b > VERIFY_RTOL:
            raise IllConditioned(
                f"CCF round trip failed (A residual {err_A:.2e}, b residual {err_b:.2e})"
            )

    if strict and n <= EXTENDED_DET_MAX_N:
        sign, logabs = _krylov_slogdet_mp(sys.A, sys.b)
        sign *= -1.0 if (n * (n - 1) // 2) % 2 else 1.0
        det_Wc = numerics.det_from_slogdet(sign, logabs)
    else:
        sign, logabs = numerics.lu_slogdet(W_c)
        det_Wc = numerics.lu_det(W_c) if strict else numerics.det_from_slogdet(sign, logabs)
    return CcfData(
        W_c=W_c, det_Wc=float(det_Wc), log_abs_det_Wc=logabs,
        A_c=A_c, B_c=e_n, a=a, cond_Pn=cond,
    )


def cluster_eigenvalues(spectrum, tol_cluster=None, allow_complex=False):
    """Group nearly equal eigenvalues into ``(lambda, multiplicity)`` pairs.

    Values are sorted by decreasing real part and merged greedily while they
    stay within ``tol_cluster`` of the running cluster mean; the mean is the
    representative. Non-real input raises :class:`ComplexSpectrum` unless
    ``allow_complex`` is set.
    """
    spectrum = np.asarray(spectrum, dtype=complex).ravel()
    if tol_cluster is None:
        tol_cluster = CLUSTER_RTOL * np.max(np.abs(spectrum), initial=0.0)
    if not allow_complex and np.any(np.abs(spectrum.imag) > tol_cluster):
        raise ComplexSpectrum(f"non-real eigenvalues in {spectrum}")
    values = spectrum if allow_complex else spectrum.real
    order = np.lexsort((-values.imag, -values.real)) if allow_complex else np.argsort(-values)
    clusters = []
    members = []
    for v in values[order]:
        if members and abs(v - np.mean(members)) <= tol_cluster:
            members.append(v)
            continue
        if members:
            clusters.append((np.mean(members), len(members)))
        members = [v]
    if members:
        clusters.append((np.mean(members), len(members)))
    if not allow_complex:
        clusters = [(float(lam), m) for lam, m in clusters]
    return clusters


@dataclass(frozen=True)
class EigenStructure:
    """Jordan-route data of a companion system.

    ``P_J`` brings ``(A_c, B_c)`` to Jordan form, ``beta = P_J^-1 B_c`` is split
    per cluster. ``det_Wc`` carries the CCF transform so that volumes refer to
    the original state coordinates.
    """

    clusters: list
    beta: list
    P_J: np.ndarray
    det_PJ: float
    log_abs_det_PJ: float
    det_Wc: float = 1.0
    log_abs_det_Wc: float = 0.0

    @property
    def q(self):
        return len(self.clusters)

    @property
    def n(self):
        return self.P_J.shape[0]

    @property
    def spectrum(self):
        """Eigenvalues repeated by multiplicity."""
        return np.array([lam for lam, m in self.clusters for _ in range(m)])


def jordan_chain(lam, m, n):
    """Columns ``(1/k!) d^k/dlam^k [1, lam, ..., lam^(n-1)]`` for ``k < m``."""
    V = np.zeros((n, m))
    for k in range(m):
        for r in range(k, n):
            V[r, k] = comb(r, k) * lam ** (r - k)
    return V


def eigen_structure_ccf(ccf, tol_cluster=None, spectrum=None):
    """Jordan transform of the companion pair from the (clustered) spectrum.

    ``spectrum`` defaults to the eigenvalues of ``A_c``; any matrix similar to
    it (the original ``A`` in particular) gives the same spectrum with better
    conditioning.
    """
    if spectrum is None:
        spectrum = numerics.eigenvalues(ccf.A_c)
    clusters = cluster_eigenvalues(spectrum, tol_cluster)
    n = ccf.n
    P_J = np.hstack([jordan_chain(lam, m, n) for lam, m in clusters])
    beta_full = np.linalg.solve(P_J, ccf.B_c)
    beta = []
    start = 0
    for _, m in clusters:
        beta.append(beta_full[start:start + m])
        start += m
    sign, logabs = numerics.lu_slogdet(P_J)
    det_PJ = numerics.det_from_slogdet(sign, logabs)
    return EigenStructure(
        clusters=clusters, beta=beta, P_J=P_J,
        det_PJ=float(det_PJ), log_abs_det_PJ=logabs,
        det_Wc=ccf.det_Wc, log_abs_det_Wc=ccf.log_abs_det_Wc,
    )


def eigen_structure_direct(clusters, beta, P_J=None):
    """Eigenstructure given directly in Jordan coordinates (``P_J = I`` by default)."""
    n = sum(m for _, m in clusters)
    P_J = np.eye(n) if P_J is None else numerics.as_matrix(P_J, square=True)
    beta = [np.atleast_1d(np.asarray(bi, dtype=float)) for bi in beta]
    sign, logabs = numerics.lu_slogdet(P_J)
    return EigenStructure(
        clusters=[(float(lam), int(m)) for lam, m in clusters], beta=beta, P_J=P_J,
        det_PJ=numerics.lu_det(P_J), log_abs_det_PJ=logabs,
    )
