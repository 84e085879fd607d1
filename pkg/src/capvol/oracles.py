"""Numerical ground truth for the analytical volumes.

The zonotope oracle discretizes the bang-bang input into ``m`` constant slices;
the resulting polytope is a zonotope with one generator per slice, whose
volume is exactly ``2^n`` times the sum of ``|det|`` over all n-subsets of
generators. The ellipsoid oracle takes ``Pi_n sqrt(det G)`` of the Grammian
from the Lyapunov solver. Neither path touches canonical forms or Hurwitz
determinants.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice

import mpmath
import numpy as np

from . import numerics
from .errors import BudgetExceeded, ComplexSpectrum, SingularMatrix, UnstableSystem
from .hurwitz import l_n
from .system import grammian_infinite
from .volumes import pi_n

#: max number of n-subsets enumerated by the discretized zonotope oracle
SUBSET_BUDGET = 10**7

_CHUNK = 200_000


@dataclass(frozen=True)
class ZonotopeApprox:
    generators: np.ndarray
    T: float
    m: int

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=float)
        if g.ndim != 2 or g.shape[0] != self.m:
            raise ValueError(f"expected {self.m} generators, got array of shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("generators must be finite")
        object.__setattr__(self, "generators", g)

    @property
    def n(self):
        return self.generators.shape[1]


def default_horizon(sys, time_constants=12.0):
    """Horizon covering ``time_constants`` of the slowest mode."""
    slowest = np.min(np.abs(numerics.eigenvalues(sys.A).real))
    if slowest == 0.0:
        raise UnstableSystem("a mode with zero real part has no finite horizon")
    return time_constants / slowest


def build_generators(sys, T, m):
    """Generators ``int_{t_k}^{t_k + dt} e^(At) b dt`` for ``m`` slices of ``[0, T]``.

    Slices are integrated exactly as ``A^-1 (e^(A dt) - I) e^(A t_k) b``; a
    singular ``A`` falls back to the midpoint rule.
    """
    if T <= 0:
        raise ValueError("horizon must be positive")
    if m < sys.n:
        raise ValueError(f"need at least n={sys.n} slices, got {m}")
    dt = T / m
    step = numerics.expm(sys.A * dt)
    try:
        first = numerics.mat_inverse(sys.A) @ ((step - np.eye(sys.n)) @ sys.b)
    except SingularMatrix:
        first = numerics.expm(sys.A * (dt / 2)) @ sys.b * dt
    gens = np.empty((m, sys.n))
    gens[0] = first
    for k in range(1, m):
        gens[k] = step @ gens[k - 1]
    return ZonotopeApprox(generators=gens, T=float(T), m=int(m))


def _subset_chunks(m, n):
    it = combinations(range(m), n)
    while True:
        idx = np.fromiter(islice(it, _CHUNK), dtype=np.dtype((np.intp, n)))
        if idx.size == 0:
            return
        yield idx


def _chunk_sum(gens, idx):
    return math.fsum(np.abs(np.linalg.det(gens[idx])).tolist())


def zonotope_volume_discretized(za, budget=SUBSET_BUDGET, workers=None):
    """Exact volume of the zonotope spanned by ``za.generators``.

    Subsets are enumerated in lexicographic order, in chunks; with ``workers``
    the chunks are spread over a thread pool. Each chunk is summed with
    ``math.fsum`` so the total is insensitive to the partitioning up to a few
    ulps.
    """
    m, n = za.generators.shape
    count = math.comb(m, n)
    if count > budget:
        raise BudgetExceeded(f"C({m}, {n}) = {count} subsets exceeds budget {budget}")
    gens = za.generators
    if workers:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(lambda idx: _chunk_sum(gens, idx), _subset_chunks(m, n)))
    else:
        partial = [_chunk_sum(gens, idx) for idx in _subset_chunks(m, n)]
    return 2.0 ** n * math.fsum(partial)


#: Grammian condition number above which the oracle re-solves in extended precision
GRAMIAN_COND_LIMIT = 1e8


def _gramian_logdet_mp(A, b, dps):
    """``log det G`` from a Kronecker Lyapunov solve carried out in mpmath."""
    n = A.shape[0]
    with mpmath.workdps(dps):
        Am = mpmath.matrix(A.tolist())
        K = mpmath.zeros(n * n, n * n)
        rhs = mpmath.matrix(n * n, 1)
        for i in range(n):
            for j in range(n):
                row = i * n + j
                rhs[row] = -mpmath.mpf(b[i]) * mpmath.mpf(b[j])
                for k in range(n):
                    K[row, k * n + j] += Am[i, k]
                    K[row, i * n + k] += Am[j, k]
        x = mpmath.lu_solve(K, rhs)
        G = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                G[i, j] = x[i * n + j]
        det = mpmath.det(G)
        if det <= 0:
            return -math.inf
        return float(mpmath.log(det))


def ellipsoid_volume_gramian(sys, dps=None):
    """``Pi_n sqrt(det G_inf)`` from the Lyapunov-equation Grammian.

    The float64 Grammian is used when it is well conditioned. Otherwise, or
    whenever ``dps`` is given, the same Kronecker system is solved in mpmath
    at ``dps`` digits (50 by default): ``det G`` of an ill-conditioned
    Grammian carries roughly ``cond(G) * eps`` relative error in float64.
    """
    G = grammian_infinite(sys)
    if dps is None:
        sign, logdet = numerics.lu_slogdet(G)
        if sign > 0 and np.linalg.cond(G) <= GRAMIAN_COND_LIMIT:
            return pi_n(sys.n) * math.exp(0.5 * logdet)
        dps = 50
    logdet = _gramian_logdet_mp(np.asarray(sys.A), np.asarray(sys.b), dps)
    return pi_n(sys.n) * math.exp(0.5 * logdet)


def l_n_oracle(p, imag_tol=1e-6):
    """``L_n`` evaluated at the roots of ``p`` (companion eigenvalues)."""
    from .canonical import companion

    p = numerics.as_polynomial(p)
    roots = numerics.eigenvalues(companion(p[1:]))
    if np.any(np.abs(roots.imag) > imag_tol):
        raise ComplexSpectrum(f"polynomial has non-real roots {roots}")
    return l_n(roots.real)
