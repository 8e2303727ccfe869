"""Coincidence counts for random pairs across every e | p-1 up to a cap.

Prints one CSV row per (e, d) cell with the maximum count, the de bound and
the share of pairs inside p/e +- 9 d sqrt(p).
"""

import argparse
import random
import sys

from hidden_power.ff import validate_params
from hidden_power.stats import emit_report, random_pair, survey


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=1009)
    ap.add_argument("--max-e", type=int, default=30)
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    reports = []
    for e in (k for k in range(1, args.max_e + 1) if (args.p - 1) % k == 0):
        ctx = validate_params(args.p, e)
        for d in (1, 2):
            if d * e >= args.p:
                continue
            rng = random.Random(f"{args.seed}:{e}:{d}")
            pairs = [random_pair(d, args.p, rng) for _ in range(args.pairs)]
            reports.append(survey(ctx, d, pairs, args.seed))
    sys.stdout.write(emit_report(reports, "csv"))


if __name__ == "__main__":
    main()
