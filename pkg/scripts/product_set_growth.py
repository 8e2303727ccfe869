"""Growth of the nu-fold product set of {f(x)/g(x) : 1 <= x <= h} with h.

Compares #A^(nu) with the order e of the subgroup the set would have to
live in if f^e and g^e agreed on the prefix.
"""

import argparse
import random
import sys

from hidden_power.ff import validate_params
from hidden_power.stats import emit_report, product_set_size, random_pair


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=10007)
    ap.add_argument("--e", type=int, default=2)
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--nu", type=int, default=2, choices=(1, 2, 3))
    ap.add_argument("--h", type=int, nargs="+", default=[2, 4, 8, 16, 32, 64, 128])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    ctx = validate_params(args.p, args.e)
    f, g = random_pair(args.d, args.p, random.Random(args.seed))
    reports = [product_set_size(f, g, h, args.nu, ctx) for h in args.h if h < args.p]
    sys.stdout.write(emit_report(reports, "csv"))


if __name__ == "__main__":
    main()
