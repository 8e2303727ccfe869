"""Command line entry point.

Every subcommand prints one JSON document (or a CSV table) on stdout and a
short human summary on stderr. Exit codes: 0 success, 1 algorithmic failure,
2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import os
import random
import sys
import time
from dataclasses import asdict

from . import idtest as idt
from . import stats
from .errors import HiddenPowerError
from .ff import FieldCtx, validate_params
from .interp import InterpConfig, naive_interpolate, randomized_interpolate
from .oracle import LocalOracle, PowerOracle, RemoteOracle, serve
from .poly import MonicPoly, parse_coeffs, random_monic

FORMAT_ENV = "HIDDEN_POWER_FORMAT"

# algorithm could not finish; everything else derived from HiddenPowerError is bad input
_ALGORITHMIC = ("search_exhausted", "too_many_roots", "not_a_perfect_power", "protocol")


class UsageError(Exception):
    pass


def _poly(text: str, ctx: FieldCtx) -> MonicPoly:
    try:
        return MonicPoly.from_coeffs(parse_coeffs(text), ctx.p)
    except ValueError as exc:
        raise UsageError(f"bad polynomial {text!r}: {exc}") from None


def _open_oracle(ctx: FieldCtx, local: str | None, remote: str | None) -> tuple[PowerOracle, str]:
    if (local is None) == (remote is None):
        raise UsageError("each oracle needs exactly one source: hidden coefficients or a remote address")
    if remote is not None:
        return RemoteOracle.connect(remote, ctx), f"remote:{remote}"
    return LocalOracle(_poly(local, ctx), ctx), "local"


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _summary(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- subcommands -----------------------------------------------------------


def cmd_serve_oracle(args) -> int:
    ctx = validate_params(args.p, args.e)
    hidden = _poly(args.poly, ctx)
    if args.stdio == bool(args.listen):
        raise UsageError("give exactly one of --stdio or --listen ADDR")
    served = serve(hidden, ctx, "stdio" if args.stdio else "socket", args.listen or "")
    _summary(f"served {served} queries")
    return 0


def _idtest_budget(args, ctx: FieldCtx) -> tuple[int, dict]:
    d = args.d
    if args.h is not None:
        return args.h, {"source": "explicit", "h": args.h}
    if args.delta is not None:
        b = idt.small_e_budget(ctx.e, d, args.delta, args.c_d, p=ctx.p)
        return b.h, {"source": "small_e", **b.to_json()}
    if args.epsilon is not None:
        b = idt.medium_e_budget(ctx.e, d, args.epsilon, p=ctx.p)
        return b.h, {"source": "medium_e", **b.to_json()}
    h = d * ctx.e + 1
    return h, {"source": "degree_bound", "h": h}


def cmd_idtest(args) -> int:
    ctx = validate_params(args.p, args.e)
    remotes = args.oracle or []
    if len(remotes) > 2:
        raise UsageError("--oracle takes at most two addresses")
    f_remote = remotes[0] if remotes else None
    of, src_f = _open_oracle(ctx, args.f if f_remote is None else None, f_remote)
    out = {"subcommand": "idtest", "p": ctx.p, "e": ctx.e, "d": args.d, "mode": args.mode, "seed": args.seed}
    try:
        if args.mode == "known-g":
            if args.g is None:
                raise UsageError("known-g mode needs --g")
            h, budget = _idtest_budget(args, ctx)
            verdict = idt.known_g_test(of, _poly(args.g, ctx), h)
            out.update(budget=budget, oracle_sources=[src_f])
            queries = [of.query_count]
        else:
            g_remote = remotes[1] if len(remotes) > 1 else None
            og, src_g = _open_oracle(ctx, args.g if g_remote is None else None, g_remote)
            try:
                if args.mode == "prefix":
                    h, budget = _idtest_budget(args, ctx)
                    verdict = idt.prefix_test(of, og, h)
                    out["budget"] = budget
                else:
                    verdict = idt.randomized_test(of, og, args.trials, random.Random(args.seed))
                    out["trials"] = args.trials
                out["oracle_sources"] = [src_f, src_g]
                queries = [of.query_count, og.query_count]
            finally:
                og.close()
    finally:
        of.close()
    out.update(verdict=verdict.to_json(), queries=queries)
    _emit(out)
    _summary(f"idtest: {verdict.outcome}" + (f" at x={verdict.witness}" if verdict.witness is not None else ""))
    return 0


def cmd_interpolate(args) -> int:
    ctx = validate_params(args.p, args.e)
    o, source = _open_oracle(ctx, args.hidden, args.oracle)
    out = {
        "subcommand": "interpolate", "p": ctx.p, "e": ctx.e, "d": args.d,
        "mode": args.mode, "epsilon": args.epsilon, "seed": args.seed, "oracle_source": source,
    }
    t0 = time.perf_counter()
    try:
        if args.mode == "naive":
            g = naive_interpolate(o, args.d)
            out.update(candidate=list(g.coeffs), degree=g.degree, queries=o.query_count, verified=True)
        else:
            cfg = InterpConfig(d=args.d, epsilon=args.epsilon, t_factor=args.t_factor, seed=args.seed)
            res = randomized_interpolate(o, cfg)
            out.update(res.to_json())
            if res.queries_used != o.query_count:  # pragma: no cover
                raise AssertionError("query accounting drifted")
    finally:
        o.close()
    if not args.no_timing:
        out["wall_time_s"] = round(time.perf_counter() - t0, 6)
    _emit(out)
    _summary(f"interpolate: {MonicPoly(tuple(out['candidate']), ctx.p)} after {out['queries']} queries")
    return 0


def _pairs(args, ctx: FieldCtx):
    if args.f is not None or args.g is not None:
        if args.f is None or args.g is None:
            raise UsageError("give both --f and --g, or neither")
        return [(_poly(args.f, ctx), _poly(args.g, ctx))]
    rng = random.Random(args.seed)
    return [stats.random_pair(args.d, ctx.p, rng) for _ in range(args.trials)]


def cmd_experiment(args) -> int:
    ctx = validate_params(args.p, args.e)
    fmt = args.format or os.environ.get(FORMAT_ENV, "json")
    kind = args.kind
    if args.d is None and (kind == "survey" or args.f is None):
        raise UsageError(f"experiment {kind} needs --d unless --f and --g are given")
    if kind == "survey":
        rng = random.Random(args.seed)
        pairs = [stats.random_pair(args.d, ctx.p, rng) for _ in range(args.trials)]
        reports = [stats.survey(ctx, args.d, pairs, args.seed)]
    else:
        reports = []
        for f, g in _pairs(args, ctx):
            row = {"seed": args.seed, "f": list(f.coeffs), "g": list(g.coeffs)}
            if kind == "coincidence":
                row.update(asdict(stats.coincidence_count(f, g, ctx)))
            elif kind == "fraction":
                frac = stats.distinguishing_fraction(f, g, ctx)
                row.update(p=ctx.p, e=ctx.e, fraction=str(frac), at_least_third=3 * frac >= 1)
            elif kind == "equiv":
                row.update(p=ctx.p, e=ctx.e, equivalent=stats.equiv_bruteforce(f, g, ctx))
            else:
                if args.h is None:
                    raise UsageError("product-set needs --h")
                row.update(asdict(stats.product_set_size(f, g, args.h, args.nu, ctx)))
            reports.append(row)
    if fmt == "csv":
        sys.stdout.write(stats.emit_report(reports, "csv"))
    else:
        doc = {"subcommand": "experiment", "kind": kind, "seed": args.seed, "reports": [
            json.loads(stats.emit_report(r)) for r in reports
        ]}
        _emit(doc)
    _summary(f"experiment {kind}: {len(reports)} report(s)")
    return 0


BENCH_FIELDS = ["p", "e", "d", "search_space", "trials", "test_set_size", "rounds",
                "queries_total", "queries_max", "exact", "equivalent", "failures"]


def bench_rows(p: int, es, ds, trials: int, seed: int, epsilon: float = 0.01, timing: bool = False):
    """Yield one summary row per (e, d) cell of randomized interpolation runs."""
    for e, d in itertools.product(es, ds):
        ctx = validate_params(p, e)
        rng = random.Random(f"{seed}:{p}:{e}:{d}")
        row = dict(p=p, e=e, d=d, search_space=e**d, trials=trials)
        q_total = q_max = exact = equivalent = failures = 0
        t0 = time.perf_counter()
        cfg = None
        for t in range(trials):
            f = random_monic(d, p, rng)
            cfg = InterpConfig(d=d, epsilon=epsilon, seed=rng.randrange(2**32))
            o = LocalOracle(f, ctx)
            try:
                res = randomized_interpolate(o, cfg)
            except HiddenPowerError:
                failures += 1
                continue
            q_total += res.queries_used
            q_max = max(q_max, res.queries_used)
            exact += res.candidate == f
            equivalent += stats.equiv_bruteforce(res.candidate, f, ctx)
        row.update(test_set_size=cfg.test_set_size(p) if cfg else 0, rounds=cfg.rounds if cfg else 0,
                   queries_total=q_total, queries_max=q_max, exact=exact,
                   equivalent=equivalent, failures=failures)
        if timing:
            row["wall_time_s"] = round(time.perf_counter() - t0, 6)
        yield row


def cmd_bench(args) -> int:
    fieldnames = BENCH_FIELDS + (["wall_time_s"] if args.timing else [])
    writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in bench_rows(args.p, args.e, args.d, args.trials, args.seed, args.epsilon, args.timing):
        writer.writerow(row)
        sys.stdout.flush()
    return 0


# --- parser ----------------------------------------------------------------


def _field_args(ap, d_required=True):
    ap.add_argument("--p", type=int, required=True, help="prime modulus")
    ap.add_argument("--e", type=int, required=True, help="exponent dividing p - 1")
    ap.add_argument("--d", type=int, required=d_required, help="polynomial degree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hidden-power", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ap = sub.add_parser("serve-oracle", help="answer f(x)^e queries over JSON lines")
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--e", type=int, required=True)
    ap.add_argument("--poly", required=True, help='low coefficients of the hidden monic f, e.g. "[4,3]"')
    ap.add_argument("--listen", metavar="HOST:PORT")
    ap.add_argument("--stdio", action="store_true")
    ap.set_defaults(func=cmd_serve_oracle)

    ap = sub.add_parser("idtest", help="identity testing from powers")
    _field_args(ap)
    ap.add_argument("--mode", choices=["prefix", "random", "known-g"], default="prefix")
    budget = ap.add_mutually_exclusive_group()
    budget.add_argument("--h", type=int, help="explicit prefix length")
    budget.add_argument("--delta", type=float, help="small-e budget parameter")
    budget.add_argument("--epsilon", type=float, help="medium-e budget parameter")
    ap.add_argument("--c-d", dest="c_d", type=float, default=idt.DEFAULT_C_D)
    ap.add_argument("--f", help="hidden coefficients of f (local oracle)")
    ap.add_argument("--g", help="coefficients of g (hidden for prefix/random, known for known-g)")
    ap.add_argument("--oracle", nargs="+", metavar="ADDR", help="remote oracle address(es) for f [and g]")
    ap.add_argument("--trials", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.set_defaults(func=cmd_idtest)

    ap = sub.add_parser("interpolate", help="recover f from its power oracle")
    _field_args(ap)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--t-factor", type=float, default=2.0)
    ap.add_argument("--hidden", help="hidden coefficients (local oracle)")
    ap.add_argument("--oracle", metavar="ADDR", help="remote oracle address")
    ap.add_argument("--mode", choices=["naive", "randomized"], default="randomized")
    ap.add_argument("--no-timing", action="store_true", help="omit wall time for byte-stable output")
    ap.set_defaults(func=cmd_interpolate)

    ap = sub.add_parser("experiment", help="exhaustive field measurements")
    ap.add_argument("kind", choices=["coincidence", "fraction", "equiv", "product-set", "survey"])
    _field_args(ap, d_required=False)
    ap.add_argument("--h", type=int)
    ap.add_argument("--nu", type=int, default=1)
    ap.add_argument("--f")
    ap.add_argument("--g")
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=["json", "csv"])
    ap.set_defaults(func=cmd_experiment)

    ap = sub.add_parser("bench", help="randomized interpolation over a parameter grid (CSV)")
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--e", type=int, nargs="+", required=True)
    ap.add_argument("--d", type=int, nargs="+", default=[1])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timing", action="store_true")
    ap.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)})
        parser.print_usage(sys.stderr)
        return 2
    except HiddenPowerError as exc:
        _emit({"error": exc.code, "message": str(exc)})
        return 1 if exc.code in _ALGORITHMIC else 2
    except OSError as exc:
        _emit({"error": "io", "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
