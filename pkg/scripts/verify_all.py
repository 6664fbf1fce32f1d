"""Replay every theorem in both ballot domains and print a timing table.

Scaled replays run at n = 1, 2, 3. Exit status is 0 only if every replay passes.
"""

import argparse
import json
import sys
import time

from marginkit.replay import THEOREMS, run_theorem


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", nargs="+", default=["linear", "weak"], choices=["linear", "weak"])
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--json", help="write all reports to this file")
    args = ap.parse_args()

    rows, docs = [], []
    for theorem in THEOREMS:
        for mode in args.modes:
            for n in range(1, args.max_n + 1) if theorem in ("thm2", "thm4") else (1,):
                t0 = time.perf_counter()
                rep = run_theorem(theorem, mode, n)
                dt = time.perf_counter() - t0
                rows.append((theorem, mode, n, rep.passed, len(rep.assertions), dt))
                docs.append(rep.to_dict())
                for a in rep.failures:
                    print(f"  FAILED {theorem}/{mode}/n={n}: {a.label} {a.detail}")
    print(f"{'theorem':<9} {'mode':<7} {'n':>2} {'result':<6} {'checks':>6} {'seconds':>8}")
    for theorem, mode, n, ok, k, dt in rows:
        print(f"{theorem:<9} {mode:<7} {n:>2} {'pass' if ok else 'FAIL':<6} {k:>6} {dt:>8.2f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(docs, fh, indent=2, sort_keys=True)
    return 0 if all(r[3] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
