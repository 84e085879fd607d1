"""Analytical volumes of the infinite-time controllability zonotope and ellipsoid.

Three routes per region:

* ``jordan``  -- eigenvalues plus the Jordan transform and input couplings,
* ``ccf``     -- eigenvalues and the canonical-form transform determinant,
* ``hurwitz`` -- canonical-form transform and the Hurwitz determinant only.

Every formula is evaluated as a sum of log-magnitudes. Up to ``LOG_DIM`` states
the factors are also multiplied directly and that product is returned, above
it the value is ``exp`` of the log sum (factors such as ``2^n / L_n`` leave
double range long before the product does).
"""

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import canonical, hurwitz, numerics
from .errors import CapvolError, NotHurwitzStable, PreconditionViolated
from .hurwitz import log_abs_l_n

METHODS = ("jordan", "ccf", "hurwitz")
REGIONS = ("zonotope", "ellipsoid")

#: dimension above which volumes are assembled from log-magnitudes
LOG_DIM = 25


@dataclass(frozen=True)
class VolumeResult:
    value: float
    method: str
    region: str
    preconditions_met: bool = True
    notes: str = ""
    log_value: float = float("nan")


@dataclass
class VolumeReport:
    """Per-method results for one system, with optional oracles and timings.

    ``results`` maps ``"region/method"`` to a :class:`VolumeResult`; skipped
    methods appear with ``preconditions_met=False`` and the reason in ``notes``.
    """

    n: int
    results: dict = field(default_factory=dict)
    oracles: dict = field(default_factory=dict)
    discrepancy: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        """Plain JSON-safe dict; NaN becomes ``None``."""
        return {
            "n": self.n,
            "results": {
                k: {f: _nan_to_none(x) for f, x in asdict(v).items()}
                for k, v in self.results.items()
            },
            "oracles": {k: _nan_to_none(v) for k, v in self.oracles.items()},
            "discrepancy": dict(self.discrepancy),
            "timings": dict(self.timings),
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, d):
        def res(v):
            v = dict(v)
            for f in ("value", "log_value"):
                v[f] = math.nan if v[f] is None else v[f]
            return VolumeResult(**v)

        return cls(
            n=d["n"],
            results={k: res(v) for k, v in d["results"].items()},
            oracles={k: math.nan if v is None else v for k, v in d["oracles"].items()},
            discrepancy=dict(d["discrepancy"]),
            timings=dict(d["timings"]),
            diagnostics=dict(d["diagnostics"]),
        )


def _nan_to_none(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def gamma_half_integer(s):
    """Gamma at a positive integer or half-integer by downward recursion."""
    two_s = round(2 * s)
    if two_s < 1 or abs(two_s - 2 * s) > 1e-12:
        raise ValueError(f"{s} is not a positive integer or half-integer")
    g = math.sqrt(math.pi) if two_s % 2 else 1.0
    x = 0.5 if two_s % 2 else 1.0
    while x < s - 1e-12:
        g *= x
        x += 1.0
    return g


def pi_n(n):
    """Volume of the unit ball in ``R^n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.pi ** (n / 2) / gamma_half_integer(n / 2 + 1)


def _log_pi_n(n):
    return 0.5 * n * math.log(math.pi) - math.lgamma(n / 2 + 1)


def _assemble(n, log_terms, direct):
    """Combine one formula's factors; ``direct`` is a thunk giving the plain product.

    Returns ``(value, log_value, used_log_path)``. The direct product is also
    abandoned when it under- or overflows.
    """
    logsum = math.fsum(log_terms)
    if n <= LOG_DIM:
        with np.errstate(all="ignore"):
            value = float(abs(direct()))
        if 0.0 < value < math.inf:
            return value, logsum, False
    return (math.exp(logsum) if logsum < 709.0 else math.inf), logsum, True


def _result(n, log_terms, direct, method, region, notes=""):
    value, logv, log_path = _assemble(n, log_terms, direct)
    if log_path:
        notes = f"{notes}; log-magnitude" if notes else "log-magnitude"
    return VolumeResult(value, method, region, True, notes, logv)


def _require_negative(clusters):
    for lam, _ in clusters:
        if not lam < 0:
            raise PreconditionViolated(f"eigenvalue {lam} is not in (-inf, 0)")


def _require_beta(es):
    for (lam, m), b in zip(es.clusters, es.beta):
        if b[-1] == 0.0:
            raise PreconditionViolated(f"input coupling of the block at {lam} vanishes")


def _jordan_log_terms(es, region):
    """Shared log-magnitude factors of the zonotope/ellipsoid Jordan formulas."""
    n = es.n
    terms = [es.log_abs_det_Wc, es.log_abs_det_PJ]
    terms.append(n * math.log(2.0) if region == "zonotope" else _log_pi_n(n))
    cl = es.clusters
    for i in range(len(cl)):
        for j in range(i + 1, len(cl)):
            (li, mi), (lj, mj) = cl[i], cl[j]
            terms.append(mi * mj * (math.log(abs(lj - li)) - math.log(abs(li + lj))))
    for (lam, m), b in zip(cl, es.beta):
        if region == "zonotope":
            terms.append(m * (math.log(abs(b[-1])) - math.log(abs(lam))))
            terms.append(-m * (m - 1) / 2 * math.log(abs(2 * lam)))
        else:
            terms.append(m * math.log(abs(b[-1])))
            terms.append(-m * m / 2 * math.log(abs(2 * lam)))
    return terms


def _jordan_v1(es, region):
    """All eigenvalues simple."""
    lam = np.array([c[0] for c in es.clusters])
    beta = np.array([b[-1] for b in es.beta])
    n = lam.size
    i, j = np.triu_indices(n, k=1)
    pair = np.prod((lam[j] - lam[i]) / (lam[i] + lam[j]))
    if region == "zonotope":
        return 2.0 ** n * es.det_Wc * es.det_PJ * pair * np.prod(beta / lam)
    return pi_n(n) * es.det_Wc * es.det_PJ * pair * np.prod(beta / np.sqrt(np.abs(2 * lam)))


def _jordan_v2(es, region):
    """A single Jordan block."""
    (lam, n), = es.clusters
    bn = es.beta[0][-1]
    if region == "zonotope":
        return 2.0 ** n * es.det_Wc * es.det_PJ * (bn / lam) ** n / (2 * lam) ** (n * (n - 1) // 2)
    return pi_n(n) * es.det_Wc * es.det_PJ * bn ** n / abs(2 * lam) ** (n * n / 2)


def _jordan_v3(es, region):
    """General block structure; reduces to V1 / V2 on their special cases."""
    n = es.n
    cl = es.clusters
    value = (2.0 ** n if region == "zonotope" else pi_n(n)) * es.det_Wc * es.det_PJ
    for i in range(len(cl)):
        for j in range(i + 1, len(cl)):
            (li, mi), (lj, mj) = cl[i], cl[j]
            value *= ((lj - li) / (li + lj)) ** (mi * mj)
    for (lam, m), b in zip(cl, es.beta):
        if region == "zonotope":
            value *= (b[-1] / lam) ** m / (2 * lam) ** (m * (m - 1) // 2)
        else:
            value *= b[-1] ** m / abs(2 * lam) ** (m * m / 2)
    return value


def jordan_case(es):
    if all(m == 1 for _, m in es.clusters):
        return "V1"
    if es.q == 1:
        return "V2"
    return "V3"


def _volume_jordan(es, region, case=None):
    _require_negative(es.clusters)
    _require_beta(es)
    case = case or jordan_case(es)
    formula = {"V1": _jordan_v1, "V2": _jordan_v2, "V3": _jordan_v3}[case]
    return _result(es.n, _jordan_log_terms(es, region), lambda: formula(es, region),
                   "jordan", region, f"case {case}")


def zonotope_volume_jordan(es, case=None):
    """Zonotope volume from Jordan data (simple, single-block or general case)."""
    return _volume_jordan(es, "zonotope", case)


def ellipsoid_volume_jordan(es, case=None):
    """Ellipsoid volume from Jordan data; real negative spectra only."""
    return _volume_jordan(es, "ellipsoid", case)


def _require_an(ccf):
    a_n = ccf.a[-1]
    if not a_n > 0:
        raise PreconditionViolated(f"constant coefficient a_n = {a_n} is not positive")
    return a_n


def zonotope_volume_ccf(ccf, es):
    """``2^n |det W_c| / |L_n|`` with ``L_n`` from the eigenvalues."""
    _require_negative(es.clusters)
    lam = es.spectrum
    n = ccf.n
    terms = [n * math.log(2.0), ccf.log_abs_det_Wc, -log_abs_l_n(lam)]
    return _result(n, terms, lambda: 2.0 ** n * ccf.det_Wc / hurwitz.l_n(lam), "ccf", "zonotope")


def ellipsoid_volume_ccf(ccf, es):
    """``Pi_n sqrt(a_n / 2^n) |det W_c| / |L_n|``."""
    _require_negative(es.clusters)
    a_n = _require_an(ccf)
    lam = es.spectrum
    n = ccf.n
    terms = [_log_pi_n(n), 0.5 * (math.log(a_n) - n * math.log(2.0)),
             ccf.log_abs_det_Wc, -log_abs_l_n(lam)]
    return _result(
        n, terms, lambda: pi_n(n) * math.sqrt(a_n / 2.0 ** n) * ccf.det_Wc / hurwitz.l_n(lam),
        "ccf", "ellipsoid",
    )


def _require_stable(hd, check):
    if check:
        verdict = hurwitz.is_hurwitz_stable(hd)
        if not verdict:
            raise NotHurwitzStable(f"Hurwitz minors {np.array2string(verdict.minors, precision=4)}")


def zonotope_volume_hurwitz(ccf, hd, check_stability=True):
    """``2^n |det W_c / det H|``; no eigenvalues anywhere on this path."""
    _require_stable(hd, check_stability)
    n = ccf.n
    terms = [n * math.log(2.0), ccf.log_abs_det_Wc, -hd.log_abs_det_H]
    return _result(n, terms, lambda: 2.0 ** n * ccf.det_Wc / hd.det_H, "hurwitz", "zonotope")


def ellipsoid_volume_hurwitz(ccf, hd, check_stability=True):
    """``Pi_n sqrt(a_n / 2^n) |det W_c / det H|``."""
    _require_stable(hd, check_stability)
    a_n = _require_an(ccf)
    n = ccf.n
    terms = [_log_pi_n(n), 0.5 * (math.log(a_n) - n * math.log(2.0)),
             ccf.log_abs_det_Wc, -hd.log_abs_det_H]
    return _result(
        n, terms, lambda: pi_n(n) * math.sqrt(a_n / 2.0 ** n) * ccf.det_Wc / hd.det_H,
        "hurwitz", "ellipsoid",
    )


def compute_volume(sys, region="zonotope", method="hurwitz", strict=True, tol_cluster=None):
    """Run one route end to end on ``sys``, from the raw ``(A, b)`` pair.

    The Jordan and CCF routes eigensolve the original ``A`` (better conditioned
    than the companion matrix); the Hurwitz route never eigensolves.
    ``strict=False`` disables conditioning guards and the stability pre-check,
    which only the benchmark harness should do.
    """
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}")
    ccf = canonical.to_ccf(sys, strict=strict)
    if method == "hurwitz":
        hd = hurwitz.hurwitz_matrix(np.concatenate(([1.0], ccf.a)), minors=strict)
        fn = zonotope_volume_hurwitz if region == "zonotope" else ellipsoid_volume_hurwitz
        return fn(ccf, hd, check_stability=strict)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    es = canonical.eigen_structure_ccf(
        ccf, tol_cluster, spectrum=numerics.eigenvalues(sys.A),
    )
    if method == "jordan":
        return _volume_jordan(es, region)
    fn = zonotope_volume_ccf if region == "zonotope" else ellipsoid_volume_ccf
    return fn(ccf, es)


def relative_discrepancy(values):
    """Largest ``|v1 - v2| / max(|v1|, |v2|)`` over all pairs."""
    values = list(values)
    worst = 0.0
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            v1, v2 = values[i], values[j]
            denom = max(abs(v1), abs(v2))
            if denom > 0:
                worst = max(worst, abs(v1 - v2) / denom)
    return worst


def full_report(sys, regions=REGIONS, methods=METHODS, oracle=False, tol=None,
                tol_cluster=None, oracle_m=80):
    """All applicable routes for ``sys`` with timings and pairwise discrepancy.

    Routes that fail a precondition are recorded as skipped, with the
    exception name and message in ``notes``; nothing is raised.
    """
    from .system import diagnose

    diag = diagnose(sys, tol=tol, tol_cluster=tol_cluster)
    report = VolumeReport(n=sys.n)
    report.diagnostics = {
        "controllable": diag.controllable,
        "rank_Pn": diag.rank_Pn,
        "rank_tol": diag.rank_tol,
        "spectrum_class": diag.spectrum_class,
        "spectrum_real": [float(x) for x in diag.spectrum.real],
        "spectrum_imag": [float(x) for x in diag.spectrum.imag],
    }
    for region in regions:
        ok = []
        for method in methods:
            key = f"{region}/{method}"
            t0 = time.perf_counter()
            try:
                res = compute_volume(sys, region, method, tol_cluster=tol_cluster)
            except CapvolError as exc:
                res = VolumeResult(
                    math.nan, method, region, False, f"{type(exc).__name__}: {exc}",
                )
            report.timings[key] = time.perf_counter() - t0
            report.results[key] = res
            if res.preconditions_met:
                ok.append(res.value)
        report.discrepancy[region] = relative_discrepancy(ok)
        if oracle:
            report.oracles[region] = _oracle_value(sys, region, oracle_m)
    return report


def _oracle_value(sys, region, m):
    from . import oracles
    try:
        if region == "ellipsoid":
            return oracles.ellipsoid_volume_gramian(sys)
        T = oracles.default_horizon(sys)
        return oracles.zonotope_volume_discretized(oracles.build_generators(sys, T, m))
    except CapvolError:
        return math.nan
