"""Interpolation from powers.

Two algorithms:

* :func:`naive_interpolate` interpolates F = f^e from d*e + 1 values and takes
  its monic e-th root. Only possible when d*e < p.
* :func:`randomized_interpolate` needs O(d log p log(1/eps)) queries. It fixes
  d anchor points a_j, takes one e-th root z_j of each oracle value, and then
  searches all e^d corrections z_j * zeta^alpha_j for the monic interpolant
  that agrees with the oracle on a random test set T.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegreeOverflow, NotAPerfectPower, SearchExhausted, SearchTooLarge, TooManyRoots
from .group import amm_root, subgroup_generator
from .oracle import PowerOracle
from .poly import MonicPoly, eval_poly, lagrange_coeffs, monic_eth_root, trim

MAX_SEARCH = 10**7


@dataclass(frozen=True)
class InterpConfig:
    d: int
    epsilon: float = 0.01
    t_factor: float = 2.0
    seed: int = 0
    max_search: int = MAX_SEARCH

    def test_set_size(self, p: int) -> int:
        return max(1, math.ceil(self.t_factor * self.d * math.log2(p)))

    @property
    def rounds(self) -> int:
        # each round succeeds with probability >= 0.99
        return max(1, math.ceil(math.log(1 / self.epsilon) / math.log(100) - 1e-12))


@dataclass
class InterpResult:
    candidate: MonicPoly
    rounds_used: int
    queries_used: int
    verified: bool
    test_set_size: int = 0
    anchors: list[int] = field(default_factory=list)
    skipped_roots: int = 0
    candidates_tried: int = 0

    def to_json(self) -> dict:
        return {
            "candidate": list(self.candidate.coeffs),
            "degree": self.candidate.degree,
            "rounds": self.rounds_used,
            "queries": self.queries_used,
            "verified": self.verified,
            "test_set_size": self.test_set_size,
            "anchors": self.anchors,
            "skipped_roots": self.skipped_roots,
            "candidates_tried": self.candidates_tried,
        }


def naive_interpolate(o: PowerOracle, d: int) -> MonicPoly:
    """Recover f exactly from d*e + 1 queries at x = 0, 1, ..., d*e."""
    p, e = o.ctx.p, o.ctx.e
    n = d * e
    if n >= p:
        raise DegreeOverflow(f"d*e = {n} must be below p = {p}")
    points = [(x, o.query(x)) for x in range(n + 1)]
    F = trim(lagrange_coeffs(points, p))
    if len(F) != n + 1:
        raise NotAPerfectPower(f"f^e has degree {len(F) - 1}, expected {n}")
    return monic_eth_root(F, e, p)


def verify_candidate(g: MonicPoly, o: PowerOracle, checks: Sequence[tuple[int, int]]) -> bool:
    """True iff g(a)^e matches the cached oracle value b at every (a, b).

    Uses only ``o.ctx``; no queries are issued.
    """
    p, e = o.ctx.p, o.ctx.e
    return all(pow(eval_poly(g, a), e, p) == b for a, b in checks)


def _select_anchors(o: PowerOracle, d: int) -> tuple[list[int], list[int], int]:
    """First d points x = 1, 2, ... where the oracle is nonzero."""
    anchors, values = [], []
    skipped = 0
    if d == 0:
        return anchors, values, skipped
    limit = min(2 * d + 1, o.ctx.p - 1)
    for x in range(1, limit + 1):
        b = o.query(x)
        if b == 0:
            skipped += 1
            continue
        anchors.append(x)
        values.append(b)
        if len(anchors) == d:
            return anchors, values, skipped
    raise TooManyRoots(f"fewer than {d} non-root anchors among x = 1..{limit}")


def _basis(anchors: list[int], p: int) -> list[list[int]]:
    """Lagrange basis polynomials (low coefficients) for the anchor set."""
    d = len(anchors)
    out = []
    for j in range(d):
        unit = [(a, 1 if k == j else 0) for k, a in enumerate(anchors)]
        out.append(lagrange_coeffs(unit, p))
    return out


def randomized_interpolate(o: PowerOracle, cfg: InterpConfig) -> InterpResult:
    """Find g with g(x)^e = f(x)^e, with probability at least 1 - epsilon.

    Every round samples a fresh test set T (uniform, with replacement) and
    queries it, re-queries the anchors, and searches alpha in E^d in
    lexicographic order. A candidate must agree with the test sets of all
    rounds so far, so the rounds compound. Queries per round are exactly
    |T| + d + (anchors skipped because the oracle returned 0).
    """
    ctx = o.ctx
    p, e, d = ctx.p, ctx.e, cfg.d
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if p <= 2 * d:
        raise ValueError(f"need p > 2d, got p = {p}, d = {d}")
    if e**d > cfg.max_search:
        raise SearchTooLarge(f"e^d = {e}^{d} exceeds the search ceiling {cfg.max_search}")

    rng = random.Random(cfg.seed)
    sub = subgroup_generator(ctx, rng)
    size = cfg.test_set_size(p)
    start = o.query_count

    # powers of zeta, indexed by alpha
    zeta_pows = [pow(sub.zeta, k, p) for k in range(e)]
    checks: list[tuple[int, int]] = []
    candidate = None
    tried = 0
    anchors: list[int] = []
    skipped_total = 0

    for _ in range(cfg.rounds):
        test_points = [rng.randrange(p) for _ in range(size)]
        checks.extend((a, o.query(a)) for a in test_points)

        anchors, values, skipped = _select_anchors(o, d)
        skipped_total += skipped
        zs = [amm_root(sub, b) for b in values]
        shifts = [pow(a, d, p) for a in anchors]
        basis = _basis(anchors, p)

        candidate = None
        for alpha in itertools.product(range(e), repeat=d):
            tried += 1
            low = [0] * d
            for j in range(d):
                w = (zs[j] * zeta_pows[alpha[j]] - shifts[j]) % p
                if w:
                    for k, c in enumerate(basis[j]):
                        low[k] = (low[k] + w * c) % p
            g = MonicPoly(tuple(low), p)
            if verify_candidate(g, o, checks):
                candidate = g
                break
        if candidate is None:
            raise SearchExhausted(f"no candidate of degree {d} matches the oracle")

    return InterpResult(
        candidate=candidate,
        rounds_used=cfg.rounds,
        queries_used=o.query_count - start,
        verified=verify_candidate(candidate, o, checks),
        test_set_size=size,
        anchors=anchors,
        skipped_roots=skipped_total,
        candidates_tried=tried,
    )

