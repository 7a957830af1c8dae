"""Command-line front end.

    toricmoduli fan build -d 2 -n 3 [--variant lm|stage1|plm-rays] [--order-seed S]
    toricmoduli fan verify SUITE --d-max 3 --n-max 5
    toricmoduli tree cycle|reconstruct|limit|oracle FILE
    toricmoduli lct eval FILE | lct tdn3 -d 2 | lct certificate -d 3
    toricmoduli report all

Exit status: 0 pass, 1 verification failure, 2 usage or guard error.
FILE may be "-" for standard input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from . import degeneration as dg
from . import harness
from . import jsonio
from . import lct as lc
from . import moduli_fans as mf
from . import trees as tr
from .fan import FanError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(doc: Any, as_json: bool, text: str | None = None) -> None:
    if as_json or text is None:
        print(jsonio.dumps(jsonio.to_jsonable(doc), pretty=not as_json))
    else:
        print(text)


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e


def _check_dn(d: int, n: int) -> None:
    if d < 1 or n < 3:
        raise UsageError(f"need d >= 1 and n >= 3, got d={d}, n={n}")
    dim = d * (n - 1) - 1
    if dim > harness.MAX_AMBIENT_DIM:
        raise UsageError(f"d(n-1)-1 = {dim} exceeds the guard {harness.MAX_AMBIENT_DIM}")


# fan -------------------------------------------------------------------------


def cmd_fan_build(args) -> int:
    d, n = args.d, args.n
    _check_dn(d, n)
    if args.variant == "plm-rays":
        if d < 2:
            raise UsageError("plm-rays needs d >= 2")
        rays = sorted(mf.plm_rays(d, n))
        doc = {"rank": len(rays[0]) if rays else 0, "rays": [list(r) for r in rays]}
        _emit(doc, args.json, "\n".join(str(tuple(r)) for r in rays))
        return EXIT_OK
    if args.variant == "stage1":
        f = mf.stage1_fan(d, n)
    else:
        order = None
        if args.order_seed is not None:
            order = mf.random_admissible_order(n, random.Random(args.order_seed))
        f = mf.build_lm_fan(d, n, order)
    text = (f"rank {f.rank}, {len(f.rays)} rays, {len(f.max_cones)} maximal cones\n"
            + "\n".join(f"ray {i}: {tuple(r)}" for i, r in enumerate(f.rays)) + "\n"
            + "\n".join(f"cone {list(c)}" for c in f.max_cones))
    _emit(f.to_json(), args.json, text)
    return EXIT_OK


def _print_report(rep: harness.Report, args) -> int:
    timing = getattr(args, "timing", False)
    if args.json:
        print(jsonio.dumps(jsonio.to_jsonable(rep.to_json(timing))))
    else:
        for r, line in zip(rep.records, rep.lines()):
            print(line + (f" ({r.runtime:.2f}s)" if timing else ""))
        print("overall:", "PASS" if rep.ok else "FAIL")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_fan_verify(args) -> int:
    cfg = harness.VerifyConfig(d_max=args.d_max, n_max=args.n_max, n_min=args.n_min,
                               order_trials=args.order_trials, seed=args.seed)
    try:
        cfg.check()
    except harness.GuardError as e:
        raise UsageError(str(e)) from e
    suites = harness.SUITES if args.suite == "all" else (args.suite,)
    return _print_report(harness.verify(suites, cfg), args)


# tree ------------------------------------------------------------------------


def cmd_tree(args) -> int:
    data = _load(args.file)
    if args.action == "cycle":
        t = jsonio.tree_from_json(data)
        problems = tr.validate_tree(t)
        if problems:
            raise UsageError("; ".join(problems))
        z = tr.configuration_cycle(t)
        doc = jsonio.cycle_to_json(z)
        doc["class"] = list(tr.cycle_class(z))
        _emit(doc, args.json)
        return EXIT_OK
    if args.action == "reconstruct":
        z = jsonio.cycle_from_json(data)
        try:
            t = tr.reconstruct_tree(z)
        except tr.MalformedCycleError as e:
            raise UsageError(f"malformed cycle: {e}") from e
        _emit(jsonio.tree_to_json(t), args.json)
        return EXIT_OK
    f = jsonio.family_from_json(data)
    problems = dg.validate_family(f)
    if problems:
        raise UsageError("; ".join(problems))
    if args.action == "limit":
        _emit(jsonio.tree_to_json(dg.limit_tree(f)), args.json)
        return EXIT_OK
    ok = dg.oracle_check(f)
    t = dg.limit_tree(f)
    doc = {
        "pass": ok,
        "levels": dg.raw_levels(f),
        "limits": [jsonio.configuration_to_json(dg.gv_limit(f, lv)) for lv in dg.raw_levels(f)],
        "tree": jsonio.tree_to_json(t),
    }
    _emit(doc, args.json, "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# lct -------------------------------------------------------------------------


def cmd_lct(args) -> int:
    if args.action == "eval":
        a = jsonio.arrangement_from_json(_load(args.file))
        if not a.forms:
            raise UsageError("empty arrangement")
        fl = lc.flats(a)
        value = min(f.ratio for f in fl)
        doc = {"lct": value, "flats": [{"codim": f.codim, "s": f.s, "forms": sorted(f.forms)} for f in fl]}
        _emit(doc, args.json, jsonio.rat_str(value))
        return EXIT_OK
    d = args.d
    if d < 2:
        raise UsageError("need d >= 2")
    if args.action == "tdn3":
        if args.method == "closed-form":
            value = lc.tdn3_closed_form(d)
        else:
            value = lc.tdn3_min_ratio(d, args.method)
        _emit({"d": d, "method": args.method, "min_ratio": value}, args.json, jsonio.rat_str(value))
        return EXIT_OK
    cert = lc.log_fano_certificate(d)
    text = "{} witnesses ({})".format("PASS" if cert["pass"] else "FAIL",
                                     ", ".join(jsonio.rat_str(w) for w in cert["witnesses"]))
    _emit(cert, args.json, text)
    return EXIT_OK if cert["pass"] else EXIT_FAIL


# report ----------------------------------------------------------------------


def cmd_report(args) -> int:
    cfg = harness.AcceptanceConfig(seed=args.seed)
    known = harness.acceptance_criteria(cfg)
    only = None
    if args.only:
        only = [c.strip() for c in args.only.split(",") if c.strip()]
        bad = [c for c in only if c not in known]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
    return _print_report(harness.report_all(cfg, only), args)


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="toricmoduli", description="Exact checks for T^LM_{d,n}.")
    sub = p.add_subparsers(dest="group", required=True)

    fan = sub.add_parser("fan").add_subparsers(dest="verb", required=True)
    b = fan.add_parser("build", parents=[common])
    b.add_argument("-d", type=int, required=True)
    b.add_argument("-n", type=int, required=True)
    b.add_argument("--variant", choices=("lm", "stage1", "plm-rays"), default="lm")
    b.add_argument("--order-seed", type=int, default=None,
                   help="blow up the centers in a random admissible order")
    b.set_defaults(func=cmd_fan_build)

    v = fan.add_parser("verify", parents=[common])
    v.add_argument("suite", choices=harness.SUITES + ("all",))
    v.add_argument("--d-max", type=int, default=3)
    v.add_argument("--n-max", type=int, default=5)
    v.add_argument("--n-min", type=int, default=3)
    v.add_argument("--order-trials", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--timing", action="store_true", help="include runtimes (not byte-stable)")
    v.set_defaults(func=cmd_fan_verify)

    tree = sub.add_parser("tree").add_subparsers(dest="action", required=True)
    for action in ("cycle", "reconstruct", "limit", "oracle"):
        t = tree.add_parser(action, parents=[common])
        t.add_argument("file")
        t.set_defaults(func=cmd_tree)

    lct = sub.add_parser("lct").add_subparsers(dest="action", required=True)
    e = lct.add_parser("eval", parents=[common])
    e.add_argument("file")
    e.set_defaults(func=cmd_lct)
    t = lct.add_parser("tdn3", parents=[common])
    t.add_argument("-d", type=int, required=True)
    t.add_argument("--method", choices=("factorized", "flats", "closed-form"), default="factorized")
    t.set_defaults(func=cmd_lct)
    c = lct.add_parser("certificate", parents=[common])
    c.add_argument("-d", type=int, required=True)
    c.set_defaults(func=cmd_lct)

    rep = sub.add_parser("report").add_subparsers(dest="verb", required=True)
    r = rep.add_parser("all", parents=[common])
    r.add_argument("--only", default=None, help="comma-separated criterion ids, e.g. AC1,AC12")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--timing", action="store_true")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, jsonio.SchemaError, FanError, lc.ArrangementError,
            harness.GuardError, tr.TreeError, dg.FamilyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
