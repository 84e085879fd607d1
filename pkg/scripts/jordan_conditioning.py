"""Log-volume gap of each route against the Hurwitz route as n grows.

The Jordan route solves against a confluent Vandermonde matrix, so its error
tracks that matrix's condition number; this script makes the growth visible.

    python3 scripts/jordan_conditioning.py --n 4,8,12,16,24,32
"""

import argparse

import numpy as np

from capvol import compute_volume
from capvol.sampling import random_system


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", default="4,8,12,16,24,32")
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()
    print(f"{'n':>3} {'jordan-hurwitz':>15} {'ccf-hurwitz':>13} {'cond(vander)':>13}")
    for n in (int(x) for x in args.n.split(",")):
        s = random_system(n, np.random.default_rng(args.seed), orthogonal=True, ensure_ccf=False)
        logs = {m: compute_volume(s, "zonotope", m, strict=False).log_value
                for m in ("jordan", "ccf", "hurwitz")}
        lam = np.linalg.eigvals(s.A).real
        cond = np.linalg.cond(np.vander(lam, increasing=True).T)
        print(f"{n:>3} {logs['jordan'] - logs['hurwitz']:15.3e} "
              f"{logs['ccf'] - logs['hurwitz']:13.3e} {cond:13.2e}")


if __name__ == "__main__":
    main()
