"""Run the censuses behind the checked-in fixtures and (optionally) rewrite them.

    python scripts/run_census.py                 # print summaries
    python scripts/run_census.py --write-fixtures
    python scripts/run_census.py --results results/  # full CensusReport JSON per case
"""

import argparse
import json
import time
from pathlib import Path

from regaffine.census import FIXTURE_CASES, cross_check, fixture_dir, fixture_name, run_census


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write-fixtures", action="store_true")
    ap.add_argument("--results", type=Path, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for n, p, ab in FIXTURE_CASES:
        t0 = time.perf_counter()
        rep = run_census(n, p, ab, args.jobs)
        summary = rep.summary()
        summary["extras"] = sorted(str(c.report.label) for c in rep.classes if c.report and c.report.caveat)
        summary["cross_check"] = [f"{d.kind}: {d.detail}" for d in cross_check(rep)]
        print(json.dumps(summary), f"({time.perf_counter() - t0:.1f}s)")
        if args.write_fixtures:
            (fixture_dir() / fixture_name(n, p, ab)).write_text(json.dumps(summary, indent=2) + "\n")
        if args.results:
            args.results.mkdir(parents=True, exist_ok=True)
            (args.results / fixture_name(n, p, ab)).write_text(json.dumps(rep.to_json(), indent=2) + "\n")


if __name__ == "__main__":
    main()
