"""Oracle calls per randomized interpolation as p grows, against d*log2(p).

Each row averages a handful of runs with fresh hidden polynomials.
"""

import argparse
import csv
import math
import random
import sys

from hidden_power.ff import is_prime, validate_params
from hidden_power.interp import InterpConfig, randomized_interpolate
from hidden_power.oracle import LocalOracle
from hidden_power.poly import random_monic


def primes_with_divisor(e, lo, hi, count):
    out, p = [], lo - (lo % e) + 1
    while p < hi and len(out) < count:
        if p > lo and is_prime(p):
            out.append(p)
        p += e
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e", type=int, default=3)
    ap.add_argument("--d", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["p", "e", "d", "mean_queries", "d_log2_p", "ratio"])
    for bits in (8, 12, 16, 20, 24, 32, 40, 48, 56):
        for p in primes_with_divisor(args.e, 2 ** bits, 2 ** (bits + 1), 1):
            ctx = validate_params(p, args.e)
            for d in args.d:
                total = 0
                for _ in range(args.runs):
                    o = LocalOracle(random_monic(d, p, rng), ctx)
                    randomized_interpolate(o, InterpConfig(d=d, epsilon=args.epsilon, seed=rng.randrange(2**32)))
                    total += o.query_count
                scale = d * math.log2(p)
                out.writerow([p, args.e, d, total / args.runs, round(scale, 2), round(total / args.runs / scale, 3)])


if __name__ == "__main__":
    main()
