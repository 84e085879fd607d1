"""``capvol`` command line: diagnostics, volumes, benchmarks and lemma sweeps.

Exit codes: 0 success, 1 I/O or parse failure, 2 a requested method failed
its preconditions.
"""

import argparse
import csv
import json
import math
import os
import statistics
import sys
import time

import numpy as np

from . import hurwitz, numerics
from .errors import CapvolError, DimensionMismatch, ParseError
from .system import LctSystem, controllability_matrix, diagnose
from .volumes import METHODS, REGIONS, compute_volume, full_report

EXIT_OK, EXIT_IO, EXIT_PRECONDITION = 0, 1, 2

#: env var holding a relative tolerance that replaces both the rank and cluster defaults
TOL_ENV = "CAPVOL_TOL"

BENCH_MIN_TRIALS = 9
BENCH_MAX_N = 50
LEMMA_MAX_N = 10

BENCH_COLUMNS = ["n", "method", "median_seconds", "iterations", "volume_value",
                 "log_volume", "log_path"]
LEMMA_COLUMNS = ["index", "n", "det_H", "L_n", "rel_gap", "sign_ratio"]


def fmt_real(x):
    """Shortest round-trip representation, ``.`` as decimal separator."""
    return repr(float(x))


def load_system(path):
    """Read a SystemFile: ``{"n": 2, "A": [[...], ...], "B": [...], "name": "..."}``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise ParseError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}"
        ) from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    missing = [k for k in ("n", "A", "B") if k not in data]
    if missing:
        raise ParseError(f"{path}: missing field(s) {', '.join(missing)}")
    n = data["n"]
    try:
        A = np.array(data["A"], dtype=float)
        B = np.array(data["B"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: A and B must be numeric arrays ({exc})") from exc
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"{path}: n must be a positive integer")
    if A.shape != (n, n):
        raise DimensionMismatch(f"{path}: A has shape {A.shape}, expected ({n}, {n})")
    if B.shape not in ((n,), (n, 1)):
        raise DimensionMismatch(f"{path}: B has shape {B.shape}, expected ({n},)")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise ParseError(f"{path}: non-finite entries")
    return LctSystem(A, B.reshape(n), name=str(data.get("name", "")))


def _tolerances(sys):
    """Absolute ``(rank_tol, cluster_tol)`` from ``CAPVOL_TOL``, or ``(None, None)``."""
    raw = os.environ.get(TOL_ENV)
    if not raw:
        return None, None
    rel = float(raw)
    Pn = controllability_matrix(sys)
    lam = numerics.eigenvalues(sys.A)
    return rel * np.max(np.abs(Pn)), rel * np.max(np.abs(lam), initial=0.0)


def cmd_info(args, out):
    sys_ = load_system(args.file)
    tol, tol_cluster = _tolerances(sys_)
    diag = diagnose(sys_, tol=tol, tol_cluster=tol_cluster)
    p = numerics.char_poly(sys_.A)
    verdict = hurwitz.is_hurwitz_stable(p)
    stable = "indeterminate" if verdict.indeterminate else str(verdict.stable).lower()
    info = {
        "name": sys_.name,
        "n": sys_.n,
        "controllable": diag.controllable,
        "rank_Pn": diag.rank_Pn,
        "rank_tol": diag.rank_tol,
        "spectrum_class": diag.spectrum_class,
        "char_poly": [float(c) for c in p],
        "stable": stable,
        "hurwitz_minors": [float(m) for m in verdict.minors],
    }
    print(f"name: {sys_.name}", file=out)
    print(f"n: {sys_.n}", file=out)
    print(f"controllable: {str(diag.controllable).lower()}", file=out)
    print(f"rank: {diag.rank_Pn} (tol {diag.rank_tol:.3g})", file=out)
    print(f"spectrum class: {diag.spectrum_class}", file=out)
    print(f"char poly: [{', '.join(f'{c:.12g}' for c in p)}]", file=out)
    print(f"stable: {stable}", file=out)
    print(f"minors: [{', '.join(f'{m:.12g}' for m in verdict.minors)}]", file=out)
    print("# machine-readable", file=out)
    print(json.dumps(info), file=out)
    return EXIT_OK


def cmd_volume(args, out):
    sys_ = load_system(args.file)
    tol, tol_cluster = _tolerances(sys_)
    methods = METHODS if args.method == "all" else (args.method,)
    report = full_report(
        sys_, regions=(args.region,), methods=methods, oracle=args.oracle,
        tol=tol, tol_cluster=tol_cluster,
    )
    if args.json:
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
    elif args.csv:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["region", "method", "value", "log_value", "preconditions_met",
                         "seconds", "oracle", "notes"])
        for key, res in report.results.items():
            writer.writerow([
                res.region, res.method, fmt_real(res.value), fmt_real(res.log_value),
                str(res.preconditions_met).lower(), fmt_real(report.timings[key]),
                fmt_real(report.oracles.get(res.region, math.nan)), res.notes,
            ])
    else:
        print(f"{sys_.name or args.file}: {args.region} volume (n={sys_.n})", file=out)
        for key, res in report.results.items():
            if res.preconditions_met:
                line = f"  {res.method:8s} {res.value:.6f}"
            else:
                line = f"  {res.method:8s} skipped"
            if res.notes:
                line += f"  ({res.notes})"
            print(line, file=out)
        if args.oracle:
            print(f"  {'oracle':8s} {report.oracles[args.region]:.6f}", file=out)
        print(f"  max pairwise discrepancy: {report.discrepancy[args.region]:.3g}", file=out)
    if any(not r.preconditions_met for r in report.results.values()):
        return EXIT_PRECONDITION
    return EXIT_OK


def bench_system(n, seed):
    """The system timed at dimension ``n``; depends only on ``(seed, n)``."""
    from .sampling import random_system

    rng = np.random.default_rng([seed, n])
    return random_system(n, rng, orthogonal=True, ensure_ccf=False)


def run_bench(n_list, trials, seed):
    """Time the three zonotope routes end to end; one system per dimension.

    A warm-up call (whose volume is reported) is discarded, then ``trials``
    calls are timed on the monotonic clock and the median is kept.
    """
    records = []
    for n in sorted(n_list):
        sys_ = bench_system(n, seed)
        for method in sorted(METHODS):
            try:
                res = compute_volume(sys_, "zonotope", method, strict=False)
                value, logv, log_path = res.value, res.log_value, "log-magnitude" in res.notes
            except CapvolError:
                value, logv, log_path = math.nan, math.nan, False
            times = []
            for _ in range(trials):
                t0 = time.perf_counter()
                try:
                    compute_volume(sys_, "zonotope", method, strict=False)
                except CapvolError:
                    pass
                times.append(time.perf_counter() - t0)
            records.append({
                "n": n, "method": method, "median_seconds": statistics.median(times),
                "iterations": trials, "volume_value": value, "log_volume": logv,
                "log_path": log_path,
            })
    return records


def _write_rows(rows, columns, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([
            fmt_real(row[c]) if isinstance(row[c], float)
            else str(row[c]).lower() if isinstance(row[c], bool) else row[c]
            for c in columns
        ])


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else sys.stdout


def cmd_bench(args, out):
    n_list = [int(x) for x in args.n.split(",") if x.strip()]
    if any(n < 1 or n > BENCH_MAX_N for n in n_list):
        raise ValueError(f"each n must be in 1..{BENCH_MAX_N}")
    if args.trials < BENCH_MIN_TRIALS:
        raise ValueError(f"--trials must be at least {BENCH_MIN_TRIALS}")
    records = run_bench(n_list, args.trials, args.seed)
    fh = _open_out(args.out)
    try:
        _write_rows(records, BENCH_COLUMNS, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    for n in sorted(set(n_list)):
        ranked = sorted((r for r in records if r["n"] == n), key=lambda r: r["median_seconds"])
        order = " < ".join(f"{r['method']} ({r['median_seconds'] * 1e3:.3f} ms)" for r in ranked)
        print(f"n={n}: {order}", file=sys.stderr)
    return EXIT_OK


def run_lemma(n, count, seed):
    rng = np.random.default_rng([seed, n])
    rows = []
    for i in range(count):
        lam = rng.uniform(-5.0, -0.1, n)
        det_H, L, gap = hurwitz.lemma1_check(lam)
        rows.append({"index": i, "n": n, "det_H": det_H, "L_n": L, "rel_gap": gap,
                     "sign_ratio": float(np.sign(det_H) * np.sign(L))})
    return rows


def cmd_lemma(args, out):
    if not 1 <= args.n <= LEMMA_MAX_N:
        raise ValueError(f"--n must be in 1..{LEMMA_MAX_N}")
    rows = run_lemma(args.n, args.count, args.seed)
    fh = _open_out(args.out)
    try:
        _write_rows(rows, LEMMA_COLUMNS, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    worst = max(r["rel_gap"] for r in rows) if rows else math.nan
    ratios = sorted({r["sign_ratio"] for r in rows})
    print(f"n={args.n}: max rel gap {worst:.3g}, sign ratio(s) {ratios}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="capvol",
        description="Volumes of infinite-time controllability zonotopes and ellipsoids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="controllability and stability diagnostics")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("volume", help="compute region volumes")
    p.add_argument("file")
    p.add_argument("--region", choices=REGIONS, default="zonotope")
    p.add_argument("--method", choices=METHODS + ("all",), default="hurwitz")
    p.add_argument("--oracle", action="store_true", help="add the numerical oracle value")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("bench", help="time the three zonotope routes")
    p.add_argument("--n", default="2,4,8", help="comma-separated dimensions")
    p.add_argument("--trials", type=int, default=BENCH_MIN_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lemma", help="sweep |det H| against |L_n| on random spectra")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lemma)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ParseError, DimensionMismatch, OSError, ValueError) as exc:
        print(f"capvol: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
