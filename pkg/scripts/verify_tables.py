"""Check every presentation row and assignment case over several primes.

    python3 scripts/verify_tables.py            # p = 2, 3, 5, 7
    python3 scripts/verify_tables.py 11 13
"""

import sys

from regaffine.linalg import Field
from regaffine.presentations import all_cases


def main(argv):
    primes = [int(a) for a in argv] or [2, 3, 5, 7]
    bad = 0
    for p in primes:
        cases = all_cases(Field(p))
        failed = []
        for case in cases:
            r = case.run()
            if not (r.relations_vanish and r.generates and r.kernel_equal):
                failed.append(case.name)
        bad += len(failed)
        print(f"F{p}: {len(cases) - len(failed)}/{len(cases)} cases hold")
        for name in failed:
            print(f"  FAILED {name}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
