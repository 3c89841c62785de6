#!/usr/bin/env python3
"""Measured subset-sum coreset sizes against the size bound.

For consecutive and random dense instances, build the progression witness and
compare |coreset| with the profile bound; also report the round count and the
final common difference.
"""

import argparse
import random

from apcert.core import Exhausted
from apcert.profiles import TUNED
from apcert.subsetsum_ap import ap_in_subset_sums, coreset_size_bound


def run(trials: int, seed: int) -> None:
    rnd = random.Random(seed)
    print(f"{'family':>12} {'n':>6} {'m':>6} {'ell':>6} "
          f"{'|coreset|':>9} {'bound':>6} {'rounds':>6} {'d':>3}")
    for t in range(trials):
        if t % 2 == 0:
            m = rnd.randint(2000, 10000)
            a = list(range(1, m + 1))
            family = "consecutive"
        else:
            m = rnd.randint(2000, 10000)
            n = rnd.randint(m // 2, m)
            a = sorted(rnd.sample(range(1, m + 1), n))
            family = "random"
        ell = m
        try:
            res = ap_in_subset_sums(a, ell, TUNED, seed=t)
        except Exhausted as exc:
            print(f"{family:>12} {len(a):>6} {m:>6} {ell:>6}  exhausted: {exc.reason[:40]}")
            continue
        bound = coreset_size_bound(ell, len(a), TUNED)
        print(f"{family:>12} {len(a):>6} {m:>6} {ell:>6} "
              f"{len(res.coreset):>9} {bound:>6} {res.rounds:>6} {res.ap.diff:>3}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=14)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(args.trials, args.seed)
