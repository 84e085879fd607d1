"""Hurwitz matrices, the Hurwitz stability test and the L_n eigenvalue polynomial.

``det H`` of a monic polynomial with real roots equals ``L_n`` up to sign; the
sign works out to ``(-1)^(n(n+1)/2)``. Volume formulas only use magnitudes.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import numerics

#: minors closer to zero than this make the stability verdict indeterminate
MARGINAL_ATOL = 1e-12


@dataclass(frozen=True)
class HurwitzData:
    """Hurwitz matrix ``H`` of ``s^n + a1 s^(n-1) + ... + an``.

    ``minors`` holds the n leading principal minors, or is ``None`` when only
    the full determinant was requested.
    """

    n: int
    a: np.ndarray
    H: np.ndarray
    minors: np.ndarray
    det_H: float
    log_abs_det_H: float


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the Hurwitz test; truthy only when strictly stable."""

    stable: bool
    indeterminate: bool
    minors: np.ndarray

    def __bool__(self):
        return self.stable


def hurwitz_array(a):
    """The n x n Hurwitz matrix for coefficients ``[a1, ..., an]``.

    Entry ``(i, j)`` (1-indexed) is ``a_(2j-i)`` with ``a0 = 1`` and zero
    outside ``0..n``.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    full = np.concatenate(([1.0], a))
    H = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            k = 2 * j - i
            if 0 <= k <= n:
                H[i - 1, j - 1] = full[k]
    return H


def hurwitz_matrix(p, minors=True):
    """Hurwitz matrix of a monic polynomial.

    With ``minors=True`` all leading principal minors are computed, one LU per
    minor; otherwise only the full determinant (one LU).
    """
    p = numerics.as_polynomial(p)
    n = p.size - 1
    if n < 1:
        raise ValueError("polynomial degree must be at least 1")
    H = hurwitz_array(p[1:])
    sign, logabs = numerics.lu_slogdet(H)
    if minors:
        mins = np.array([numerics.lu_det(H[:k, :k]) for k in range(1, n + 1)])
        det_H = float(mins[-1])
    else:
        mins = None
        det_H = numerics.det_from_slogdet(sign, logabs)
    return HurwitzData(
        n=n, a=p[1:].copy(), H=H, minors=mins, det_H=det_H, log_abs_det_H=logabs,
    )


def is_hurwitz_stable(p):
    """Hurwitz criterion: stable iff every leading principal minor is positive.

    Any minor within ``MARGINAL_ATOL`` of zero marks the verdict indeterminate
    (and not stable).
    """
    if isinstance(p, HurwitzData):
        hd = p if p.minors is not None else hurwitz_matrix(np.concatenate(([1.0], p.a)))
    else:
        hd = hurwitz_matrix(p)
    minors = hd.minors
    indeterminate = bool(np.any(np.abs(minors) <= MARGINAL_ATOL))
    stable = bool(np.all(minors > MARGINAL_ATOL))
    return StabilityVerdict(stable=stable, indeterminate=indeterminate, minors=minors)


def l_n(spectrum):
    """``L_n = prod_{i<j} (l_i + l_j) * prod_i l_i`` over real eigenvalues."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    pairs = [lam[i] + lam[j] for i, j in combinations(range(lam.size), 2)]
    return float(np.prod(pairs) * np.prod(lam))


def log_abs_l_n(spectrum):
    """``log|L_n|``, for dimensions where ``L_n`` itself overflows."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    i, j = np.triu_indices(lam.size, k=1)
    return float(np.sum(np.log(np.abs(lam[i] + lam[j]))) + np.sum(np.log(np.abs(lam))))


def lemma1_check(spectrum):
    """Compare ``det H`` of ``prod (s - l_i)`` against ``L_n``.

    Returns ``(det_H, L_n, rel_gap)`` where ``rel_gap = ||det_H| - |L_n|| / |L_n|``.
    """
    p = numerics.poly_from_roots(np.asarray(spectrum, dtype=float))
    det_H = hurwitz_matrix(p).det_H
    L = l_n(spectrum)
    return det_H, L, abs(abs(det_H) - abs(L)) / abs(L)
