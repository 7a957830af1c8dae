"""Run every acceptance criterion and write the report as JSON.

    python3 scripts/run_acceptance.py --out report.json [--timing]
"""
import argparse
import sys

from toricmoduli import harness, jsonio


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()

    rep = harness.report_all(harness.AcceptanceConfig(seed=args.seed))
    for r, line in zip(rep.records, rep.lines()):
        print(f"{line:55s} {r.runtime:7.2f}s")
    text = jsonio.dumps(jsonio.to_jsonable(rep.to_json(args.timing)), pretty=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
