"""Prime field arithmetic.

Residues are plain Python ints in ``[0, p)``. The modulus is capped below
2**62 so every product fits in 128 bits; Python ints never overflow, but the
cap keeps the wire format and any future fixed-width port honest. A
Montgomery representation would be the obvious speed-up if it is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, ExponentDoesNotDivide, ModulusTooLarge, NotPrime

MAX_MODULUS = 1 << 62

# Deterministic for n < 3.3 * 10**24, which covers the whole 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

Felt = int


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """A prime field F_p together with an exponent ``e`` dividing ``p - 1``.

    Construct through :func:`validate_params`; the constructor itself does not
    re-check primality.
    """

    p: int
    e: int

    @property
    def order(self) -> int:
        """Order of the multiplicative group, ``p - 1``."""
        return self.p - 1

    def is_residue(self, x: int) -> bool:
        return isinstance(x, int) and 0 <= x < self.p

    def add(self, a: Felt, b: Felt) -> Felt:
        return (a + b) % self.p

    def sub(self, a: Felt, b: Felt) -> Felt:
        return (a - b) % self.p

    def neg(self, a: Felt) -> Felt:
        return -a % self.p

    def mul(self, a: Felt, b: Felt) -> Felt:
        return a * b % self.p

    def inv(self, a: Felt) -> Felt:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def pow(self, a: Felt, k: int) -> Felt:
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        return pow(a, k, self.p)

    def power_oracle_value(self, y: Felt) -> Felt:
        """``y**e``, the value the hidden-power oracle would reveal for f(x) = y."""
        return pow(y, self.e, self.p)


def validate_params(p: int, e: int) -> FieldCtx:
    """Return a :class:`FieldCtx` iff ``p`` is a prime below 2**62 and ``e | p - 1``."""
    p, e = int(p), int(e)
    if p >= MAX_MODULUS:
        raise ModulusTooLarge(f"p = {p} must be below 2**62")
    if not is_prime(p):
        raise NotPrime(p)
    if e < 1 or (p - 1) % e != 0:
        raise ExponentDoesNotDivide(e, p - 1)
    return FieldCtx(p, e)


_OPS = {
    "add": FieldCtx.add,
    "sub": FieldCtx.sub,
    "mul": FieldCtx.mul,
    "inv": FieldCtx.inv,
    "pow": FieldCtx.pow,
    "neg": FieldCtx.neg,
}


def arith(ctx: FieldCtx, op: str, *operands: int) -> Felt:
    """Dispatch a named field operation, e.g. ``arith(ctx, "inv", 3)``."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return fn(ctx, *operands)
