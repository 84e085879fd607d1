"""Agreement of the three routes, and of the ellipsoid routes with the Grammian.

    python3 scripts/method_agreement_sweep.py --systems 200 --n-max 6
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from capvol import compute_volume
from capvol.oracles import ellipsoid_volume_gramian
from capvol.sampling import random_system
from capvol.volumes import METHODS, REGIONS, relative_discrepancy


@dataclass
class SweepConfig:
    systems: int = 200
    n_min: int = 2
    n_max: int = 6
    min_gap: float = 0.05
    seed: int = 0


def run(cfg):
    rng = np.random.default_rng(cfg.seed)
    span = cfg.n_max - cfg.n_min + 1
    rows = []
    for k in range(cfg.systems):
        n = cfg.n_min + k % span
        s = random_system(n, rng, min_gap=cfg.min_gap)
        gram = ellipsoid_volume_gramian(s)
        row = {"index": k, "n": n}
        for region in REGIONS:
            vals = [compute_volume(s, region, m).value for m in METHODS]
            row[f"{region}_discrepancy"] = relative_discrepancy(vals)
            if region == "ellipsoid":
                row["grammian_gap"] = max(abs(v - gram) / gram for v in vals)
        rows.append(row)
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    p.add_argument("--out", help="per-system CSV")
    args = p.parse_args()
    cfg = SweepConfig(**{k: v for k, v in vars(args).items() if k != "out"})
    rows = run(cfg)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    print(f"{'n':>3} {'zonotope':>10} {'ellipsoid':>10} {'grammian':>10}")
    for n in sorted({r["n"] for r in rows}):
        sub = [r for r in rows if r["n"] == n]
        print(f"{n:>3} {max(r['zonotope_discrepancy'] for r in sub):10.2e} "
              f"{max(r['ellipsoid_discrepancy'] for r in sub):10.2e} "
              f"{max(r['grammian_gap'] for r in sub):10.2e}")


if __name__ == "__main__":
    sys.exit(main())
