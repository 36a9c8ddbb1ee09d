#!/usr/bin/env python3
"""Random-corpus sweep: prover verdicts vs. the brute-force oracle.

Generates a seeded profile-rotating corpus, proves every sequent, then
cross-checks: proved sequents must admit no counter-model up to the
oracle bound, and saturated branches should extract a falsifying model.

    python scripts/soundness_sweep.py --size 500 --seed 7 --oracle 3
"""

import argparse
import sys
import time
from collections import Counter

from dlsequent.calculus import assemble_calculus
from dlsequent.countermodel import extract_model, find_countermodel, satisfies_sequent
from dlsequent.gen import CORPUS_PROFILES, corpus
from dlsequent.prover import BUDGET, PROVED, SATURATED, Budget, prove
from dlsequent.syntax import show


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20260808)
    ap.add_argument("--steps", type=int, default=400)
    ap.add_argument("--oracle", type=int, default=3,
                    help="max countermodel domain size (0 disables)")
    ap.add_argument("--show-failures", action="store_true")
    args = ap.parse_args(argv)

    calcs = {id(p): assemble_calculus(p) for p in CORPUS_PROFILES}
    budget = Budget(steps=args.steps, max_branch_formulas=300)

    t0 = time.monotonic()
    verdicts = Counter()
    proved, saturated = [], []
    for prof, s in corpus(args.seed, args.size):
        calc = calcs[id(prof)]
        out = prove(s, calc, budget)
        verdicts[out.verdict] += 1
        if out.verdict == PROVED:
            proved.append((calc, s))
        elif out.verdict == SATURATED:
            saturated.append((calc, s, out.branch))
    print(f"proved {verdicts[PROVED]}  saturated {verdicts[SATURATED]}  "
          f"unknown {verdicts[BUDGET]}   ({time.monotonic() - t0:.1f}s)")

    unsound = 0
    if args.oracle > 0:
        t0 = time.monotonic()
        for calc, s in proved:
            if find_countermodel(s, args.oracle, calc.ddrs) is not None:
                unsound += 1
                print(f"  UNSOUND: proved but refutable: {show(s)}")
        print(f"oracle on {len(proved)} proved sequents: {unsound} refuted "
              f"({time.monotonic() - t0:.1f}s)")

    unfaithful = []
    for calc, s, branch in saturated:
        model = extract_model(branch)
        if satisfies_sequent(model, s, calc.ddrs):
            unfaithful.append(s)
    pct = 100.0 * (len(saturated) - len(unfaithful)) / max(1, len(saturated))
    print(f"extraction falsifies the root on {pct:.1f}% of "
          f"{len(saturated)} saturated branches")
    if args.show_failures:
        for s in unfaithful:
            print(f"  not falsified: {show(s)}")
    return 1 if (unsound or unfaithful) else 0


if __name__ == "__main__":
    sys.exit(main())
