"""Ray and cone counts of T^LM_{d,n} next to the closed formulas, plus build
time, for a range of (d, n)."""
import argparse
import time
from math import factorial

from toricmoduli.fan import is_complete, is_smooth
from toricmoduli.moduli_fans import build_lm_fan

ap = argparse.ArgumentParser()
ap.add_argument("--d-max", type=int, default=3)
ap.add_argument("--n-max", type=int, default=5)
args = ap.parse_args()

print(f"{'d':>2} {'n':>2} {'rays':>5} {'formula':>7} {'cones':>6} {'formula':>7} smooth complete  time")
for d in range(1, args.d_max + 1):
    for n in range(3, args.n_max + 1):
        t0 = time.perf_counter()
        f = build_lm_fan(d, n)
        dt = time.perf_counter() - t0
        rays = 2 ** (n - 1) - 2 + (d * (n - 1) if d >= 2 else 0)
        cones = d ** (n - 1) * factorial(n - 1)
        print(f"{d:>2} {n:>2} {len(f.rays):>5} {rays:>7} {len(f.max_cones):>6} {cones:>7} "
              f"{str(is_smooth(f)):>6} {str(is_complete(f)):>8} {dt:5.2f}s")
