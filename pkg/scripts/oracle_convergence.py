"""Convergence of the discretized zonotope towards the analytical volume.

Sweeps the slice count m at fixed horizon, and the horizon T at fixed slice
width, for the diagonal two-state example (volume 2/3).

    python3 scripts/oracle_convergence.py
"""

import argparse
from dataclasses import dataclass, field

import numpy as np

from capvol import LctSystem, compute_volume
from capvol.oracles import build_generators, zonotope_volume_discretized


@dataclass
class ConvergenceConfig:
    horizon: float = 12.0
    slices: list = field(default_factory=lambda: [20, 40, 80, 160, 320])
    horizons: list = field(default_factory=lambda: [2.0, 4.0, 8.0, 12.0, 16.0])
    slice_width: float = 0.1


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizon", type=float, default=ConvergenceConfig.horizon)
    args = p.parse_args()
    cfg = ConvergenceConfig(horizon=args.horizon)
    s = LctSystem(np.diag([-1.0, -2.0]), [1.0, 1.0])
    exact = compute_volume(s, "zonotope", "hurwitz").value

    print(f"T = {cfg.horizon}, varying m (exact {exact:.10f})")
    for m in cfg.slices:
        v = zonotope_volume_discretized(build_generators(s, cfg.horizon, m))
        print(f"  m={m:4d}  {v:.10f}  rel err {abs(v - exact) / exact:.3e}")
    print(f"slice width {cfg.slice_width}, varying T")
    for T in cfg.horizons:
        m = int(round(T / cfg.slice_width))
        v = zonotope_volume_discretized(build_generators(s, T, m))
        print(f"  T={T:5.1f}  {v:.10f}  rel err {abs(v - exact) / exact:.3e}")


if __name__ == "__main__":
    main()
