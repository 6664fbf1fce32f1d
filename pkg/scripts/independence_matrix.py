"""Hunt violation witnesses and run satisfaction sweeps for each method/axiom pair.

Witness files land in tests/fixtures/witnesses by default; the acceptance suite
checks that a fresh hunt reproduces them byte for byte.
"""

import argparse
import sys
from pathlib import Path

from marginkit.axioms import AXIOM_IDS
from marginkit.formats import witness_to_text
from marginkit.methods import METHOD_IDS
from marginkit.search import SearchBudget, hunt_violations, sweep

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
from test_acceptance import RP_SWEEP, SATISFACTION_SWEEPS, WITNESS_HUNTS  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures" / "witnesses")
    ap.add_argument("--samples", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("--matrix", action="store_true", help="also sweep every method x axiom pair")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for name, (method, axiom, budget) in WITNESS_HUNTS.items():
        res = hunt_violations(method, axiom, budget)
        print(res.summary())
        if res.found:
            (args.out / f"{name}.txt").write_text(witness_to_text(res.witness))

    for method, axiom, kw in SATISFACTION_SWEEPS:
        print(sweep(method, axiom, args.samples, seed=args.seed, max_candidates=4, max_voters=9, **kw).summary())

    rp = sweep("ranked-pairs", "positive-involvement", **RP_SWEEP)
    print(rp.summary())
    if rp.found:
        (args.out / "ranked-pairs_positive-involvement.txt").write_text(witness_to_text(rp.witness))

    if args.matrix:
        for method in METHOD_IDS:
            for axiom in AXIOM_IDS:
                budget = SearchBudget(mode="random", samples=args.samples // 10, seed=args.seed,
                                      max_candidates=4, max_voters=9, jobs=args.jobs)
                print(hunt_violations(method, axiom, budget).summary())
    return 0


if __name__ == "__main__":
    sys.exit(main())
