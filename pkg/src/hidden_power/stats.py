"""Exhaustive measurements over small prime fields.

Coincidence counts compare raw power values f(x)^e and g(x)^e at every x,
zeros included. Product sets skip the x where g(x) = 0, since f/g is
undefined there. Both conventions are written into the reports.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetTooLarge, FieldTooLarge
from .ff import FieldCtx
from .poly import MonicPoly, random_monic

MAX_SCAN = 10**7
MAX_PRODUCT_WORK = 10**8

COINCIDENCE_CONVENTION = "raw f(x)^e vs g(x)^e at all x, zeros included"
PRODUCT_SET_CONVENTION = "x with g(x) = 0 excluded from A"


def _check_scan(p: int) -> None:
    if p > MAX_SCAN:
        raise FieldTooLarge(f"exhaustive scan needs p <= {MAX_SCAN}, got {p}")


def eval_all(f: MonicPoly, xs: np.ndarray) -> np.ndarray:
    """f evaluated at every entry of xs (int64, reduced mod p)."""
    p = f.p
    acc = np.ones_like(xs)
    for c in reversed(f.coeffs):
        acc = (acc * xs + c) % p
    return acc


def pow_all(ys: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.ones_like(ys)
    base = ys % p
    while k:
        if k & 1:
            out = out * base % p
        k >>= 1
        if k:
            base = base * base % p
    return out


def power_table(f: MonicPoly, e: int) -> np.ndarray:
    """f(x)^e for every x in F_p, indexed by x."""
    _check_scan(f.p)
    xs = np.arange(f.p, dtype=np.int64)
    return pow_all(eval_all(f, xs), e, f.p)


@dataclass(frozen=True)
class CoincidenceReport:
    p: int
    e: int
    d: int
    count: int
    predicted: float
    deviation: float
    convention: str = COINCIDENCE_CONVENTION


@dataclass(frozen=True)
class ProductSetReport:
    p: int
    e: int
    h: int
    nu: int
    set_size: int
    product_size: int
    in_subgroup: bool
    convention: str = PRODUCT_SET_CONVENTION


def coincidence_count(f: MonicPoly, g: MonicPoly, ctx: FieldCtx) -> CoincidenceReport:
    """Exact #{x in F_p : f(x)^e = g(x)^e}, with the Weil-normalized deviation."""
    p, e = ctx.p, ctx.e
    count = int(np.count_nonzero(power_table(f, e) == power_table(g, e)))
    d = max(f.degree, g.degree, 1)
    predicted = p / e
    return CoincidenceReport(p, e, max(f.degree, g.degree), count, predicted, abs(count - predicted) / (d * math.sqrt(p)))


def distinguishing_fraction(f: MonicPoly, g: MonicPoly, ctx: FieldCtx) -> Fraction:
    return Fraction(ctx.p - coincidence_count(f, g, ctx).count, ctx.p)


def equiv_bruteforce(f: MonicPoly, g: MonicPoly, ctx: FieldCtx) -> bool:
    """True iff the oracles for f and g agree at every point of F_p."""
    return bool(np.array_equal(power_table(f, ctx.e), power_table(g, ctx.e)))


def product_set_size(f: MonicPoly, g: MonicPoly, h: int, nu: int, ctx: FieldCtx) -> ProductSetReport:
    """Size of the nu-fold product set of A = {f(x)/g(x) : 1 <= x <= h}."""
    p, e = ctx.p, ctx.e
    if not 1 <= h < p:
        raise ValueError(f"need 1 <= h < p, got h = {h}")
    if nu not in (1, 2, 3):
        raise ValueError("nu must be 1, 2 or 3")
    if h**nu > MAX_PRODUCT_WORK:
        raise BudgetTooLarge(f"h^nu = {h}^{nu} exceeds {MAX_PRODUCT_WORK}")
    _check_scan(p)

    xs = np.arange(1, h + 1, dtype=np.int64)
    num, den = eval_all(f, xs), eval_all(g, xs)
    keep = den != 0
    num, den = num[keep], den[keep]
    den_inv = pow_all(den, p - 2, p)
    A = np.unique(num * den_inv % p)

    in_subgroup = bool(A.size) and bool(np.all(pow_all(A, e, p) == 1))
    current = A
    for _ in range(nu - 1):
        mask = np.zeros(p, dtype=bool)
        for a in A:
            mask[current * int(a) % p] = True
        current = np.flatnonzero(mask).astype(np.int64)
    return ProductSetReport(p, e, h, nu, int(A.size), int(current.size), in_subgroup)


def random_pair(d: int, p: int, rng: random.Random) -> tuple[MonicPoly, MonicPoly]:
    """Two distinct uniformly random monic polynomials of degree d."""
    while True:
        f, g = random_monic(d, p, rng), random_monic(d, p, rng)
        if f != g:
            return f, g


def all_pairs(d: int, p: int) -> Iterable[tuple[MonicPoly, MonicPoly]]:
    """Every ordered pair of distinct monic polynomials of degree d."""
    polys = [MonicPoly(c, p) for c in itertools.product(range(p), repeat=d)]
    for f in polys:
        for g in polys:
            if f != g:
                yield f, g


@dataclass(frozen=True)
class SurveyReport:
    p: int
    e: int
    d: int
    pairs: int
    max_count: int
    degree_bound: int
    bound_violations: int
    weil_window: float
    in_weil_window: int
    equivalent_pairs: int
    min_distinguishing_fraction: float
    fraction_violations: int
    seed: int


def survey(ctx: FieldCtx, d: int, pairs: Sequence[tuple[MonicPoly, MonicPoly]], seed: int = 0) -> SurveyReport:
    """Coincidence statistics over a corpus of distinct monic pairs.

    ``fraction_violations`` counts non-equivalent pairs that agree on more
    than 2/3 of the field; it is only meaningful when e <= (p - 1) / 2.
    """
    p, e = ctx.p, ctx.e
    window = 9 * max(d, 1) * math.sqrt(p)
    tables: dict = {}

    def table(f):
        t = tables.get(f)
        if t is None:
            t = tables[f] = power_table(f, e)
        return t

    max_count = violations = in_window = equivalent = frac_bad = 0
    min_frac = 1.0
    for f, g in pairs:
        count = int(np.count_nonzero(table(f) == table(g)))
        max_count = max(max_count, count)
        if d * e < p and count > d * e:
            violations += 1
        if abs(count - p / e) <= window:
            in_window += 1
        if count == p:
            equivalent += 1
            continue
        frac = (p - count) / p
        min_frac = min(min_frac, frac)
        if 3 * (p - count) < p:
            frac_bad += 1
    return SurveyReport(
        p, e, d, len(pairs), max_count, d * e, violations, window, in_window,
        equivalent, min_frac, frac_bad, seed,
    )


def _row(report) -> dict:
    out = {}
    for f in fields(report):
        v = getattr(report, f.name)
        out[f.name] = str(v) if isinstance(v, Fraction) else v
    return out


def emit_report(report, fmt: str = "json") -> str:
    """Serialize one report (or a list of them) with stable field order."""
    reports = report if isinstance(report, list) else [report]
    rows = [_row(r) if hasattr(r, "__dataclass_fields__") else dict(r) for r in reports]
    if fmt == "json":
        payload = rows if isinstance(report, list) else rows[0]
        return json.dumps(payload, separators=(",", ":"))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def load_report(text: str, cls, fmt: str = "json"):
    """Inverse of :func:`emit_report` for a single report of dataclass ``cls``."""
    if fmt == "json":
        data = json.loads(text)
    else:
        data = next(csv.DictReader(io.StringIO(text)))
    kwargs = {}
    for f in fields(cls):
        raw = data[f.name]
        kwargs[f.name] = _coerce(raw, f.type)
    return cls(**kwargs)


def _coerce(raw, type_name):
    t = type_name if isinstance(type_name, str) else getattr(type_name, "__name__", "")
    if t == "bool":
        return raw if isinstance(raw, bool) else raw == "True"
    if t == "int":
        return int(raw)
    if t == "float":
        return float(raw)
    return raw

