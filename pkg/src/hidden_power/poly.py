"""Dense polynomials over F_p.

:class:`MonicPoly` is the object the algorithms hunt for: a monic polynomial
whose leading 1 is implicit. General (non-monic) polynomials only show up
inside the naive baseline and are plain low-to-high coefficient lists.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicateNode, NotAPerfectPower


@dataclass(frozen=True)
class MonicPoly:
    """``X^d + coeffs[d-1] X^(d-1) + ... + coeffs[0]`` over F_p."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise ValueError(f"coefficients must be residues mod {self.p}: {self.coeffs}")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], p: int) -> "MonicPoly":
        """Build from low coefficients, reducing them mod p first."""
        return cls(tuple(int(c) % p for c in coeffs), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> list[int]:
        """All coefficients low-to-high including the leading 1."""
        return list(self.coeffs) + [1]

    def __call__(self, x: int) -> int:
        return eval_poly(self, x)

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": list(self.coeffs)}

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = 1 if k == self.degree else self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}")
        return " + ".join(terms) or "0"


def eval_poly(f: MonicPoly, x: int) -> int:
    """Horner evaluation of f at x."""
    p = f.p
    acc = 1
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % p
    return acc


def parse_coeffs(text: str) -> list[int]:
    """Parse the CLI coefficient list, e.g. ``"[4,3]"`` or ``"4,3"`` (low to high)."""
    text = text.strip()
    if not text.startswith("["):
        text = f"[{text}]"
    value = json.loads(text)
    if not isinstance(value, list) or not all(isinstance(c, int) for c in value):
        raise ValueError(f"expected a list of integers, got {text!r}")
    return value


def monic_interpolate(nodes: Sequence[tuple[int, int]], p: int) -> MonicPoly:
    """The unique monic f of degree ``len(nodes)`` with f(a) = y at every node.

    Writes f = X^d + r and recovers r, of degree < d, from the shifted values
    ``y - a^d`` by Lagrange interpolation.
    """
    d = len(nodes)
    shifted = [(a % p, (y - pow(a, d, p)) % p) for a, y in nodes]
    r = lagrange_coeffs(shifted, p)
    r += [0] * (d - len(r))
    return MonicPoly(tuple(r[:d]), p)


def lagrange_coeffs(points: Sequence[tuple[int, int]], p: int) -> list[int]:
    """Coefficients (low to high, length ``len(points)``) of the interpolant.

    Quadratic time: builds the node polynomial once and divides out each
    linear factor synthetically.
    """
    n = len(points)
    xs = [a % p for a, _ in points]
    seen = set()
    for a in xs:
        if a in seen:
            raise DuplicateNode(a)
        seen.add(a)
    if n == 0:
        return []

    master = [1]
    for a in xs:
        master = _mul_linear(master, a, p)

    out = [0] * n
    for a, (_, y) in zip(xs, points):
        # master / (X - a), highest coefficient first
        quot = [0] * n
        carry = 0
        for k in range(n, 0, -1):
            carry = (master[k] + carry * a) % p
            quot[k - 1] = carry
        denom = 0
        for c in reversed(quot):
            denom = (denom * a + c) % p
        scale = y % p * pow(denom, -1, p) % p
        if scale:
            for k in range(n):
                out[k] = (out[k] + scale * quot[k]) % p
    return out


def _mul_linear(poly: list[int], a: int, p: int) -> list[int]:
    """poly * (X - a)."""
    out = [0] * (len(poly) + 1)
    for k, c in enumerate(poly):
        out[k + 1] = (out[k + 1] + c) % p
        out[k] = (out[k] - a * c) % p
    return out


def poly_mul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def poly_pow(f: Sequence[int], k: int, p: int) -> list[int]:
    result = [1]
    base = list(f)
    while k:
        if k & 1:
            result = poly_mul(result, base, p)
        k >>= 1
        if k:
            base = poly_mul(base, base, p)
    return result


def trim(f: Sequence[int]) -> list[int]:
    out = list(f)
    while out and out[-1] == 0:
        out.pop()
    return out


def monic_eth_root(F: Sequence[int], e: int, p: int) -> MonicPoly:
    """Monic f with f^e = F, by power-series recursion from the leading term.

    Reversing F turns the leading term into a constant 1, after which the
    coefficients of F~^(1/e) follow from the usual recurrence for powers of a
    power series. Needs e invertible mod p and deg F / e < p.
    """
    F = trim(F)
    n = len(F) - 1
    if n < 0 or F[-1] != 1 or n % e != 0:
        raise NotAPerfectPower(f"degree {n} polynomial is not a monic {e}-th power")
    d = n // e
    rev = F[::-1]  # rev[0] == 1
    alpha = pow(e, -1, p)
    g = [1] + [0] * d
    for m in range(1, d + 1):
        acc = 0
        for k in range(1, min(m, n) + 1):
            acc += ((alpha + 1) * k - m) * rev[k] % p * g[m - k]
        g[m] = acc % p * pow(m, -1, p) % p
    f = MonicPoly(tuple(reversed(g[1:])), p)
    if trim(poly_pow(f.full_coeffs(), e, p)) != F:
        raise NotAPerfectPower(f"polynomial has no monic {e}-th root over F_{p}")
    return f


def random_monic(d: int, p: int, rng: random.Random) -> MonicPoly:
    """Uniformly random monic polynomial of exact degree d."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return MonicPoly(tuple(rng.randrange(p) for _ in range(d)), p)
