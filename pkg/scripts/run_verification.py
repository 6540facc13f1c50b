"""Run the verification protocol for T, O and I and print a summary table.

Usage::

    python3 scripts/run_verification.py [--lmax 45] [--seed 0] [--json report.json]

Exits 1 if any check fails for any group.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from symharm.verify import run_protocol


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lmax", type=int, default=45)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--directions", type=int, default=100)
    ap.add_argument("--json", help="also write the full reports to this file")
    args = ap.parse_args(argv)

    reports, ok = {}, True
    for name in ("T", "O", "I"):
        t0 = time.perf_counter()
        report = run_protocol(name, args.lmax, args.seed, args.directions)
        elapsed = time.perf_counter() - t0
        reports[name] = report.as_dict()
        ok &= report.ok
        print(f"group {name}  l=0..{args.lmax}  {'ok' if report.ok else 'FAILED'}  ({elapsed:.1f} s)")
        for check in report.checks.values():
            where = "" if check.worst_l is None else f"  worst at l={check.worst_l}"
            flag = "ok  " if check.passed else "FAIL"
            print(f"  {flag} {check.name:<15} {check.max_error:9.2e} < {check.threshold:g}{where}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(reports, fh, indent=1)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
