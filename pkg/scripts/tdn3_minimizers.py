"""Least codim/s over the flats of the A/B/C arrangement that the blow-up
does not separate, by three methods, and the minimizing local patterns."""
import argparse
import itertools
import time
from fractions import Fraction

from toricmoduli import lct as lc

ap = argparse.ArgumentParser()
ap.add_argument("--d-max", type=int, default=6)
args = ap.parse_args()

LOCAL = {"-": (0, 0), "A": (1, 1), "B": (1, 1), "C": (1, 1), "ABC": (2, 3)}

for d in range(2, args.d_max + 1):
    row = []
    for method in ("flats", "factorized", "closed-form"):
        t0 = time.perf_counter()
        v = lc.tdn3_closed_form(d) if method == "closed-form" else lc.tdn3_min_ratio(d, method)
        row.append(f"{method}={v} ({time.perf_counter() - t0:.2f}s)")
    minimizers = 0
    for combo in itertools.product(LOCAL, repeat=d):
        codim = sum(LOCAL[c][0] for c in combo)
        if codim == 0 or any(all(x in c for c in combo) for x in "ABC"):
            continue
        if Fraction(codim, sum(LOCAL[c][1] for c in combo)) == Fraction(2, 3):
            minimizers += 1
    print(f"d={d}: " + ", ".join(row) + f", minimizing flats {minimizers}")
