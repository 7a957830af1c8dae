"""Blow-up order matters once a center is blown up before a larger one
containing it.  Compare every admissible random order with an order that
takes the centers by increasing |I|."""
import argparse
import random
from dataclasses import dataclass

from toricmoduli.fan import fans_equal, is_complete, is_smooth
from toricmoduli.moduli_fans import build_lm_fan, lm_centers, order_violation, random_admissible_order


@dataclass(frozen=True)
class Config:
    d: int = 1
    n: int = 5
    trials: int = 20
    seed: int = 0


def run(cfg: Config) -> None:
    ref = build_lm_fan(cfg.d, cfg.n)
    rng = random.Random(cfg.seed)
    agree = sum(fans_equal(build_lm_fan(cfg.d, cfg.n, random_admissible_order(cfg.n, rng)), ref)
                for _ in range(cfg.trials))
    print(f"d={cfg.d} n={cfg.n}: {agree}/{cfg.trials} admissible random orders give the reference fan")

    increasing = sorted(lm_centers(cfg.n), key=lambda I: (len(I), sorted(I)))
    bad = order_violation(increasing)
    other = build_lm_fan(cfg.d, cfg.n, increasing, allow_any_order=True)
    print(f"increasing |I| order: first violation {[sorted(x) for x in bad] if bad else None}")
    print(f"  rays {len(other.rays)} vs {len(ref.rays)}, cones {len(other.max_cones)} vs {len(ref.max_cones)}, "
          f"smooth {is_smooth(other)}, complete {is_complete(other)}, equal {fans_equal(other, ref)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("-d", type=int, default=1)
    ap.add_argument("-n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(Config(a.d, a.n, a.trials, a.seed))
