"""Run the verification suites and print a results table.

Exits non-zero when any check fails, so it can gate a CI job.
"""

import argparse
import json
import sys

from lowdeg_lab.verify import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    ap.add_argument("--quick", action="store_true", help="reduced instance counts")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args()

    results = run_suite(args.suite, quick=args.quick)
    if args.json:
        json.dump([r.as_dict() for r in results], sys.stdout, indent=2)
        print()
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            ratio = "" if r.max_ratio != r.max_ratio else f"{r.max_ratio:.4g}"
            print(f"{r.name:<{width}}  {r.instances:>7}  {r.violations:>6}  {ratio:>10}  {r.verdict:<7}  {r.note}")
    return 0 if all(r.verdict != "fail" for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
