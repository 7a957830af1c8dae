"""Verification suites and the acceptance report.

Every check returns a ``Record``.  Records serialize without their runtime
unless asked, so reports are byte-identical across runs.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from . import degeneration as dg
from . import lct as lc
from . import moduli_fans as mf
from . import trees as tr
from .exactlinalg import check_quotient
from .fan import Fan, blowup_is_projective_bundle, downgrade_rays, fans_equal, is_complete, is_smooth

SUITES = ("rays", "smooth", "complete", "order", "downgrade", "fibration", "aux")

# largest projective dimension d(n-1)-1 the fan suites accept
MAX_AMBIENT_DIM = 11


class GuardError(ValueError):
    pass


@dataclass
class Record:
    claim: str
    ok: bool
    witnesses: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"claim": self.claim, "ok": self.ok, "witnesses": self.witnesses}
        if timing:
            out["runtime_s"] = round(self.runtime, 3)
        return out


@dataclass
class Report:
    records: list[Record] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def to_json(self, timing: bool = False) -> dict:
        return {"pass": self.ok, "records": [r.to_json(timing) for r in self.records]}

    def lines(self) -> list[str]:
        return [f"{'PASS' if r.ok else 'FAIL'} {r.claim}" for r in self.records]


def timed(claim: str, fn: Callable[[], tuple[bool, dict]]) -> Record:
    t0 = time.perf_counter()
    ok, wit = fn()
    return Record(claim, bool(ok), wit, time.perf_counter() - t0)


@lru_cache(maxsize=None)
def lm_fan(d: int, n: int) -> Fan:
    return mf.build_lm_fan(d, n)


def _rays_line(rays) -> list[list[int]]:
    return [list(r) for r in rays]


# ---------------------------------------------------------------------------
# fan suites


@dataclass(frozen=True)
class VerifyConfig:
    d_max: int = 3
    n_max: int = 5
    d_min: int = 1
    n_min: int = 3
    order_trials: int = 3
    seed: int = 0

    def cells(self, d_from: int | None = None) -> list[tuple[int, int]]:
        lo = self.d_min if d_from is None else max(self.d_min, d_from)
        return [(d, n) for d in range(lo, self.d_max + 1) for n in range(self.n_min, self.n_max + 1)]

    def check(self) -> None:
        if self.d_min < 1 or self.d_max < self.d_min:
            raise GuardError(f"need 1 <= d_min <= d_max, got {self.d_min}, {self.d_max}")
        if self.n_min < 3 or self.n_max < self.n_min:
            raise GuardError(f"need 3 <= n_min <= n_max, got {self.n_min}, {self.n_max}")
        dim = self.d_max * (self.n_max - 1) - 1
        if dim > MAX_AMBIENT_DIM:
            raise GuardError(f"d(n-1)-1 = {dim} exceeds the guard {MAX_AMBIENT_DIM}")


def ray_count(d: int, n: int) -> int:
    return 2 ** (n - 1) - 2 + (d * (n - 1) if d >= 2 else 0)


def check_rays(d: int, n: int) -> Record:
    def run():
        f = lm_fan(d, n)
        expected = mf.lm_rays(d, n)
        ok = f.rays == tuple(sorted(expected)) and len(f.rays) == ray_count(d, n)
        return ok, {"d": d, "n": n, "rays": len(f.rays), "expected": ray_count(d, n)}
    return timed(f"rays d={d} n={n}", run)


def check_smooth(d: int, n: int) -> Record:
    return timed(f"smooth d={d} n={n}", lambda: (is_smooth(lm_fan(d, n)), {"d": d, "n": n}))


def check_complete(d: int, n: int) -> Record:
    def run():
        f = lm_fan(d, n)
        want = mf.expected_cone_count(d, n)
        ok = is_complete(f) and len(f.max_cones) == want
        return ok, {"d": d, "n": n, "max_cones": len(f.max_cones), "expected": want}
    return timed(f"complete d={d} n={n}", run)


def check_order(d: int, n: int, trials: int = 3, seed: int = 0) -> Record:
    def run():
        rng = random.Random(f"order-{seed}-{d}-{n}")
        ref = lm_fan(d, n)
        orders = []
        ok = True
        for _ in range(trials):
            order = mf.random_admissible_order(n, rng)
            orders.append([sorted(I) for I in order])
            ok = ok and fans_equal(mf.build_lm_fan(d, n, order), ref)
        return ok, {"d": d, "n": n, "orders": orders}
    return timed(f"order d={d} n={n}", run)


def check_downgrade(d: int, n: int) -> Record:
    def run():
        sub = mf.subtorus_lattice(d, n)
        q = mf.plm_quotient(d, n)
        check_quotient(q)
        got = downgrade_rays(lm_fan(d, n), sub, q)
        want = tuple(sorted(mf.plm_rays(d, n)))
        return tuple(sorted(got)) == want, {"d": d, "n": n, "rays": len(got), "expected": len(want)}
    return timed(f"downgrade d={d} n={n}", run)


def check_stage1(d: int, n: int) -> Record:
    def run():
        rep = mf.verify_stage1(d, n)
        return rep.ok, rep.to_json()
    return timed(f"stage1 fibration d={d} n={n}", run)


def check_fibration(d: int, n: int) -> Record:
    def run():
        rep = mf.verify_fibration(d, n)
        return rep.ok, rep.to_json()
    return timed(f"fibration d={d} n={n}", run)


AUX_CASES = ((2, 0), (3, 0), (3, 1), (4, 1))


def check_bundle(m: int, k: int) -> Record:
    return timed(f"bundle m={m} k={k}", lambda: (blowup_is_projective_bundle(m, k), {"m": m, "k": k}))


def run_suite(suite: str, cfg: VerifyConfig) -> list[Record]:
    cfg.check()
    if suite == "rays":
        return [check_rays(d, n) for d, n in cfg.cells()]
    if suite == "smooth":
        return [check_smooth(d, n) for d, n in cfg.cells()]
    if suite == "complete":
        return [check_complete(d, n) for d, n in cfg.cells()]
    if suite == "order":
        # n = 3 has a single nontrivial center; d = 1 still exercises the dedup
        return [check_order(d, n, cfg.order_trials, cfg.seed) for d, n in cfg.cells() if n >= 4]
    if suite == "downgrade":
        return [check_downgrade(d, n) for d, n in cfg.cells(2)]
    if suite == "fibration":
        cells = cfg.cells(2)
        return [check_stage1(d, n) for d, n in cells] + [check_fibration(d, n) for d, n in cells]
    if suite == "aux":
        return [check_bundle(m, k) for m, k in AUX_CASES]
    raise GuardError(f"unknown suite {suite!r}")


def verify(suites: Iterable[str], cfg: VerifyConfig) -> Report:
    rep = Report()
    for s in suites:
        rep.records.extend(run_suite(s, cfg))
    return rep


# ---------------------------------------------------------------------------
# tree, degeneration and lct checks


def tree_corpus(n_max: int = 5, d_max: int = 3, fillings: int = 100, seed: int = 0):
    """Every chain shape for 2 <= n <= n_max and 1 <= d <= d_max, each with
    ``fillings`` random coordinate choices."""
    rng = random.Random(f"trees-{seed}")
    for n in range(2, n_max + 1):
        shapes = list(tr.chain_shapes(n))
        for d in range(1, d_max + 1):
            for shape in shapes:
                for _ in range(fillings):
                    yield tr.random_tree(rng, d, n, shape)


def check_cycle_classes(n_max: int = 5, d_max: int = 3, fillings: int = 100, seed: int = 0) -> Record:
    def run():
        count = 0
        for t in tree_corpus(n_max, d_max, fillings, seed):
            z = tr.configuration_cycle(t)
            if tr.cycle_class(z) != (1,) * (t.n - 1):
                return False, {"counterexample": repr(t)}
            count += 1
        return True, {"trees": count}
    return timed("cycle classes are all-ones", run)


def check_reconstruction(n_max: int = 5, d_max: int = 3, fillings: int = 100, seed: int = 0) -> Record:
    def run():
        count = 0
        for t in tree_corpus(n_max, d_max, fillings, seed):
            back = tr.reconstruct_tree(tr.configuration_cycle(t))
            if back != t or not tr.trees_isomorphic(back, t):
                return False, {"counterexample": repr(t)}
            count += 1
        return True, {"trees": count}
    return timed("reconstruct after cycle is the identity", run)


def check_degenerations(d_max: int = 3, n_max: int = 6, per_cell: int = 100, max_exp: int = 4,
                        seed: int = 0) -> Record:
    def run():
        rng = random.Random(f"families-{seed}")
        count = 0
        for d in range(1, d_max + 1):
            for n in range(3, n_max + 1):
                for _ in range(per_cell):
                    f = dg.random_family(rng, d, n, max_exp)
                    if not dg.oracle_check(f):
                        return False, {"counterexample": repr(f)}
                    count += 1
        return True, {"families": count}
    return timed("degeneration limits match the component configurations", run)


def boolean_arrangement(m: int) -> lc.CentralArrangement:
    return lc.CentralArrangement(m, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))


def braid_arrangement() -> lc.CentralArrangement:
    return lc.CentralArrangement(3, ((1, -1, 0), (1, 0, -1), (0, 1, -1)))


def check_lct(d_range: Iterable[int] = range(2, 7)) -> Record:
    def run():
        wit: dict = {}
        ok = True
        for m in range(1, 5):
            v = lc.lct(boolean_arrangement(m))
            ok &= v == 1
        wit["boolean"] = Fraction(1) if ok else v
        wit["braid"] = lc.lct(braid_arrangement())
        ok &= wit["braid"] == Fraction(2, 3)
        per_d = {}
        for d in d_range:
            a = lc.tdn3_min_ratio(d, "flats")
            b = lc.tdn3_closed_form(d)
            c = lc.tdn3_min_ratio(d, "factorized")
            per_d[str(d)] = [a, b, c]
            ok &= a == b == c == Fraction(2, 3)
        wit["tdn3"] = per_d
        return ok, wit
    return timed("log canonical thresholds", run)


def check_anticanonical(d_range: Iterable[int] = range(2, 11), cert_range: Iterable[int] = range(2, 7)) -> Record:
    def run():
        ok = True
        coeffs = {}
        for d in d_range:
            _, _, mkd = lc.pullback_and_anticanonical(d)
            want = Fraction((2 * d - 3) * (d - 1), 3)
            ok &= mkd.H == 0 and (mkd.E12, mkd.E13, mkd.E23) == (want, want, want)
            coeffs[str(d)] = mkd.E12
        certs = {}
        for d in cert_range:
            c = lc.log_fano_certificate(d)
            ok &= c["pass"]
            certs[str(d)] = c["witnesses"]
        return ok, {"e_coefficients": coeffs, "certificates": certs}
    return timed("anticanonical class and log Fano certificate", run)


# ---------------------------------------------------------------------------
# acceptance report


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    order_trials: int = 3
    tree_fillings: int = 100
    families_per_cell: int = 100


def _group(claim: str, records: list[Record]) -> Record:
    failed = [r.claim for r in records if not r.ok]
    return Record(claim, not failed, {"checks": len(records), "failed": failed},
                  sum(r.runtime for r in records))


AC1_CELLS = [(d, n) for d in (1, 2, 3) for n in (3, 4, 5)]


def acceptance_criteria(cfg: AcceptanceConfig = AcceptanceConfig()) -> dict[str, Callable[[], Record]]:
    """Criterion id -> thunk producing its record."""
    def ac(claim, fn):
        def run():
            r = fn()
            r.claim = claim
            return r
        return run

    return {
        "AC1": ac("AC1 rays", lambda: _group("", [check_rays(d, n) for d, n in AC1_CELLS])),
        "AC2": ac("AC2 smooth and complete", lambda: _group("", [check_smooth(d, n) for d, n in AC1_CELLS]
                                                            + [check_complete(d, n) for d, n in AC1_CELLS])),
        "AC3": ac("AC3 order independence", lambda: _group("", [
            check_order(d, n, cfg.order_trials, cfg.seed) for d, n in ((2, 4), (2, 5), (3, 4))])),
        "AC4": ac("AC4 maximal cone count", lambda: _group("", [check_complete(d, n) for d, n in AC1_CELLS])),
        "AC5": ac("AC5 stage-1 bundle", lambda: _group("", [
            check_stage1(d, n) for d, n in ((2, 4), (3, 4), (2, 5))])),
        "AC6": ac("AC6 full fibration", lambda: _group("", [
            check_fibration(d, n) for d, n in ((2, 3), (2, 4), (3, 3), (3, 4), (2, 5))])),
        "AC7": ac("AC7 downgrade", lambda: _group("", [
            check_downgrade(d, n) for d in (2, 3) for n in (3, 4, 5)])),
        "AC8": ac("AC8 projective bundle blow-ups", lambda: _group("", [check_bundle(m, k) for m, k in AUX_CASES])),
        "AC9": ac("AC9 cycle classes", lambda: check_cycle_classes(5, 3, cfg.tree_fillings, cfg.seed)),
        "AC10": ac("AC10 reconstruction", lambda: check_reconstruction(5, 3, cfg.tree_fillings, cfg.seed)),
        "AC11": ac("AC11 degeneration oracle", lambda: check_degenerations(3, 6, cfg.families_per_cell, 4, cfg.seed)),
        "AC12": ac("AC12 lct", check_lct),
        "AC13": ac("AC13 anticanonical", check_anticanonical),
    }


def report_all(cfg: AcceptanceConfig = AcceptanceConfig(), only: Iterable[str] | None = None) -> Report:
    crit = acceptance_criteria(cfg)
    keys = list(crit) if only is None else list(only)
    return Report([crit[k]() for k in keys])
