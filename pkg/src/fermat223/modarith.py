"""Arithmetic in Z/pZ for odd primes p below 2**63.

Residues are plain Python ints in hot paths; :class:`Residue` wraps an int
together with its :class:`PrimeField` for the public, type-carrying API.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

from .errors import KNotDividing, NonResidue, NotPrime, ZeroInverse

__all__ = [
    "MAX_MODULUS",
    "ObstructionSet",
    "PrimeField",
    "Residue",
    "factorize",
    "is_prime",
    "legendre",
    "mod_inv",
    "mod_pow",
    "mu_k",
    "sqrt_mod",
]

MAX_MODULUS = 1 << 63

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test for 0 <= n < 2**64."""
    if n < 0 or n >= 1 << 64:
        raise ValueError(f"is_prime is defined for 64-bit unsigned inputs, got {n}")
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
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


def _pollard_brent(n: int) -> int:
    # n is odd and composite
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=4096)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for q in _SMALL_PRIMES:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return tuple(sorted(out.items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    return dict(_factorize(n))


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    t = pow(a % p, (p - 1) >> 1, p)
    return -1 if t == p - 1 else t


def _sqrt(a: int, p: int) -> int:
    # canonical root min(r, p - r); Tonelli-Shanks with the p = 3 (mod 4) shortcut
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) >> 1, p) != 1:
        raise NonResidue(f"{a} is not a square modulo {p}")
    if p & 3 == 3:
        r = pow(a, (p + 1) >> 2, p)
    else:
        q, s = p - 1, 0
        while q & 1 == 0:
            q >>= 1
            s += 1
        z = 2
        while pow(z, (p - 1) >> 1, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) >> 1, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p; construction checks primality."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p < 5 or p >= MAX_MODULUS or not is_prime(p):
            raise NotPrime(f"field modulus must be a prime in [5, 2**63), got {p!r}")

    def __call__(self, value: int) -> Residue:
        return Residue(value % self.p, self)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse(f"0 has no inverse modulo {self.p}")
        return pow(a, -1, self.p)

    def sqrt(self, a: int) -> int:
        return _sqrt(a, self.p)

    def is_square(self, a: int) -> bool:
        return legendre(a, self.p) != -1

    @cached_property
    def primitive_root(self) -> int:
        """Smallest generator of the multiplicative group."""
        p = self.p
        cofactors = [(p - 1) // q for q in factorize(p - 1)]
        g = 2
        while any(pow(g, e, p) == 1 for e in cofactors):
            g += 1
        return g


@dataclass(frozen=True)
class Residue:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"residue {self.value} out of range for p={self.field.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.field.p != self.field.p:
                raise ValueError("residues belong to different fields")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __add__(self, other):
        o = self._coerce(other)
        return self.field(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self.field(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return self.field(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return self.field(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self.field(-self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self.field(self.value * self.field.inv(o))

    def __pow__(self, exp: int):
        return mod_pow(self, exp)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def mod_pow(base: Residue, exp: int) -> Residue:
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return Residue(pow(base.value, exp, base.field.p), base.field)


def mod_inv(a: Residue) -> Residue:
    return Residue(a.field.inv(a.value), a.field)


def sqrt_mod(a: Residue) -> Residue:
    """Square root of ``a``; the smaller of the two representatives."""
    return Residue(_sqrt(a.value, a.field.p), a.field)


@dataclass(frozen=True)
class ObstructionSet:
    """A sorted set of residues with the kind of set it is (``mu``, ``S``, ``Sprime``)."""

    kind: str
    field: PrimeField
    elements: tuple[int, ...]
    context: str = dc_field(default="")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return int(x) % self.field.p in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.elements)

    def residues(self) -> list[Residue]:
        return [Residue(x, self.field) for x in self.elements]

    def representatives(self) -> list[int]:
        """One element per {a, p - a} class, the smaller one."""
        p = self.field.p
        return [a for a in self.elements if a <= p - a]

    def digest(self) -> str:
        text = f"{self.kind}|{self.field.p}|{self.context}|" + ",".join(map(str, self.elements))
        return hashlib.sha256(text.encode()).hexdigest()


def mu_k(field: PrimeField, k: int) -> ObstructionSet:
    """The k-th roots of unity in F_p, sorted."""
    p = field.p
    if k < 1 or (p - 1) % k:
        raise KNotDividing(f"k={k} does not divide p-1={p - 1}")
    h = pow(field.primitive_root, (p - 1) // k, p)
    roots = [1] * k
    for i in range(1, k):
        roots[i] = roots[i - 1] * h % p
    roots.sort()
    return ObstructionSet("mu", field, tuple(roots), context=f"k={k}")
