"""Seeded random systems and spectra for sweeps, benchmarks and tests."""

import numpy as np
from scipy.stats import ortho_group

from .canonical import to_ccf
from .errors import CapvolError
from .system import LctSystem

#: redraws of ``b`` before giving up on a guard-passing system
MAX_REDRAWS = 100


def random_spectrum(n, rng, low=-5.0, high=-0.1, min_gap=0.0):
    """``n`` real eigenvalues in ``[low, high]``, pairwise at least ``min_gap`` apart.

    Uniform over the admissible set: sorted points in the shrunken interval,
    then spread by ``k * min_gap``. Returned in decreasing order.
    """
    slack = (high - low) - (n - 1) * min_gap
    if slack <= 0:
        raise ValueError("min_gap too large for the interval")
    lam = low + np.sort(rng.uniform(0.0, slack, n)) + min_gap * np.arange(n)
    return lam[::-1]


def random_system(n, rng, low=-5.0, high=-0.1, min_gap=0.05, orthogonal=False,
                  ensure_ccf=True):
    """Controllable system with a prescribed real, distinct spectrum.

    ``A = W diag(lam) W^-1`` with ``W`` Gaussian (or orthogonal, which keeps the
    eigenproblem well conditioned at large ``n``); ``b`` is Gaussian. With
    ``ensure_ccf`` the input vector is redrawn until the strict canonical-form
    guards (rank, conditioning, round trip) accept the pair; a Gaussian ``b``
    occasionally couples so weakly to one mode that ``P_n`` drops below the
    rank tolerance. Turn it off at dimensions where the guards reject everything.
    """
    lam = random_spectrum(n, rng, low, high, min_gap)
    if orthogonal:
        W = ortho_group.rvs(n, random_state=rng) if n > 1 else np.eye(1)
        A = W @ np.diag(lam) @ W.T
    else:
        while True:
            W = rng.standard_normal((n, n))
            if np.linalg.cond(W) < 1e3:
                break
        A = W @ np.diag(lam) @ np.linalg.inv(W)
    for _ in range(MAX_REDRAWS):
        sys = LctSystem(A, rng.standard_normal(n), name=f"random-n{n}")
        if not ensure_ccf:
            return sys
        try:
            to_ccf(sys)
            return sys
        except CapvolError:
            continue
    raise ValueError(f"no guard-passing input vector after {MAX_REDRAWS} draws")


def random_well_conditioned(n, rng, max_cond=1e2):
    while True:
        W = rng.standard_normal((n, n))
        if np.linalg.cond(W) < max_cond:
            return W
