"""The subgroup G_e of e-th roots of unity in F_p^*.

Everything the randomized interpolator needs besides the oracle lives here:
factoring e, building a generator of G_e from r-th power non-residues, Shanks'
baby-step giant-step logarithm, and e-th root extraction in the style of
Adleman-Manders-Miller (prime by prime, with the order-r logarithms done by
baby-step giant-step).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import NotAnEthPower, NotInSubgroup, ZeroInput
from .ff import FieldCtx

MAX_EXPONENT = 1 << 40


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` by trial division, as (prime, multiplicity) pairs."""
    if n < 1 or n > MAX_EXPONENT:
        raise ValueError(f"factorize expects 1 <= n <= 2**40, got {n}")
    out = []
    for q in (2, 3):
        k = 0
        while n % q == 0:
            n //= q
            k += 1
        if k:
            out.append((q, k))
    q = 5
    step = 2
    while q * q <= n:
        k = 0
        while n % q == 0:
            n //= q
            k += 1
        if k:
            out.append((q, k))
        q += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class _Sylow:
    r: int
    s: int  # r-adic valuation of p - 1
    t: int  # (p - 1) / r^s
    gen: int  # generator of the Sylow r-subgroup, order r^s


@dataclass(frozen=True)
class SubgroupCtx:
    """G_e together with the data needed to take roots inside F_p^*.

    ``nonresidues[r]`` is an element that is not an r-th power, one per prime
    ``r | e``; ``zeta`` has exact order e.
    """

    field: FieldCtx
    factors: tuple[tuple[int, int], ...]
    zeta: int
    nonresidues: dict = field(default_factory=dict, compare=False)

    @property
    def e(self) -> int:
        return self.field.e

    @property
    def p(self) -> int:
        return self.field.p

    def has_exact_order(self) -> bool:
        p, e, z = self.p, self.e, self.zeta
        if pow(z, e, p) != 1:
            return False
        return all(pow(z, e // r, p) != 1 for r, _ in self.factors)

    def sylow(self, r: int) -> _Sylow:
        return _sylow(self.p, r, self.nonresidues[r])


@lru_cache(maxsize=256)
def _sylow(p: int, r: int, g: int) -> _Sylow:
    n = p - 1
    s, t = 0, n
    while t % r == 0:
        t //= r
        s += 1
    return _Sylow(r, s, t, pow(g, t, p))


def subgroup_generator(ctx: FieldCtx, rng: random.Random) -> SubgroupCtx:
    """Build a generator of G_e from random r-th power non-residues.

    For each prime power r^a exactly dividing e, a non-r-th-power g_r raised
    to (p-1)/r^a has order exactly r^a; the product over r has order e.
    """
    p, e = ctx.p, ctx.e
    factors = tuple(factorize(e))
    nonres = {}
    zeta = 1
    for r, a in factors:
        while True:
            g = rng.randrange(1, p)
            if pow(g, (p - 1) // r, p) != 1:
                break
        nonres[r] = g
        zeta = zeta * pow(g, (p - 1) // r**a, p) % p
    sub = SubgroupCtx(ctx, factors, zeta, nonres)
    if not sub.has_exact_order():  # pragma: no cover - would be an arithmetic bug
        raise AssertionError(f"generator {zeta} does not have order {e} mod {p}")
    return sub


@lru_cache(maxsize=128)
def _baby_steps(base: int, n: int, p: int) -> tuple[int, dict]:
    m = max(1, math.isqrt(n - 1) + 1) if n > 1 else 1
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * base % p
    return m, table


def bsgs_dlog(base: int, target: int, n: int, p: int) -> int:
    """Smallest x in [0, n) with base^x = target mod p, where base has order n.

    Uses a table of ceil(sqrt(n)) baby steps and at most ceil(n / m) giant
    steps. Tables are cached per (base, n, p).
    """
    target %= p
    m, table = _baby_steps(base % p, n, p)
    giant = pow(base, -m, p)
    gamma = target
    for i in range(-(-n // m)):
        j = table.get(gamma)
        if j is not None:
            x = i * m + j
            if x < n:
                return x
            break
        gamma = gamma * giant % p
    raise NotInSubgroup(f"{target} is not a power of {base} mod {p}")


def _sylow_dlog(w: int, syl: _Sylow, p: int) -> int:
    """Logarithm of w to the base ``syl.gen`` (order r^s), digit by digit."""
    r, s, c = syl.r, syl.s, syl.gen
    gamma = pow(c, r ** (s - 1), p)  # order r
    c_inv = pow(c, -1, p)
    x = 0
    for i in range(s):
        h = pow(w * pow(c_inv, x, p) % p, r ** (s - 1 - i), p)
        x += bsgs_dlog(gamma, h, r, p) * r**i
    return x


def _prime_power_root(y: int, r: int, a: int, sub: SubgroupCtx) -> int:
    """One x with x^(r^a) = y, assuming y is an r^a-th power."""
    p = sub.p
    syl = sub.sylow(r)
    R = r**a
    u = pow(R, -1, syl.t) if syl.t > 1 else 0
    x0 = pow(y, u, p)
    # x0^R = y * w with w in the Sylow r-subgroup; strip an R-th root of w.
    w = pow(x0, R, p) * pow(y, -1, p) % p
    if w == 1:
        return x0
    L = _sylow_dlog(w, syl, p)
    if L % R:
        raise NotAnEthPower(f"{y} is not an {R}-th power mod {p}")
    delta = pow(syl.gen, L // R, p)
    return x0 * pow(delta, -1, p) % p


def is_eth_power(sub: SubgroupCtx, b: int) -> bool:
    p = sub.p
    return b % p != 0 and pow(b, (p - 1) // sub.e, p) == 1


def amm_root(sub: SubgroupCtx, b: int) -> int:
    """Some z with z^e = b.

    Raises :class:`ZeroInput` for b = 0 and :class:`NotAnEthPower` when
    b^((p-1)/e) != 1. Roots are taken one prime power of e at a time; each
    step leaves a value that is still a power for the remaining cofactor.
    """
    p = sub.p
    b %= p
    if b == 0:
        raise ZeroInput("0 has no multiplicative e-th root")
    if not is_eth_power(sub, b):
        raise NotAnEthPower(f"{b} is not an {sub.e}-th power mod {p}")
    z = b
    for r, a in sub.factors:
        z = _prime_power_root(z, r, a, sub)
    if pow(z, sub.e, p) != b:  # pragma: no cover
        raise AssertionError("root extraction failed")
    return z


def all_roots(sub: SubgroupCtx, z: int) -> Iterator[int]:
    """Yield z * zeta^alpha for alpha = 0, ..., e-1."""
    p = sub.p
    cur = z % p
    for _ in range(sub.e):
        yield cur
        cur = cur * sub.zeta % p
