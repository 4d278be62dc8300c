"""Reach arbitrary torus points from the circle y = 0 under the skew map.

For each target (x, y) we look for n with (n-1)x and (n+1)alpha/2 close to 0
mod 1, then start from (x_n, 0) with x_n chosen so that T^n lands next to the target.

Run: python3 demos/torus_density.py
"""
import numpy as np

from quasilab import FURSTENBERG, TorusPoint, skew_power, verify_dT_density

rng = np.random.default_rng(1)
targets = rng.random((8, 2))
records = verify_dT_density(FURSTENBERG, targets, 10 ** 7, 0.02)

print(f"{'target':>20s} {'n':>9s} {'start x_n':>10s} {'distance':>10s}")
for r in records:
    landed = skew_power(FURSTENBERG, r.n, TorusPoint(r.seed, 0.0))
    print(f"({r.target[0]:.4f}, {r.target[1]:.4f}) {r.n:9d} {r.seed:10.6f} {r.approach:10.2e}"
          f"   lands at ({landed.x:.4f}, {landed.y:.4f})")
