"""Integer-level algebra behind the Frey curve of x^2 + y^(2l) = z^3.

Everything here is exact: integers and :class:`fractions.Fraction`, with
:data:`INFINITY` standing for the point at infinity of the j-line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BothZero, ConstraintViolation, ZeroArgument
from .modarith import factorize

__all__ = [
    "INFINITY",
    "J14_VALUES",
    "DescentWitness",
    "FreyData",
    "frey_curve",
    "j5_map",
    "j_frey",
    "j_frey_twist",
    "parameterize",
    "rad_s",
    "x0_14_sanity",
]


class _Infinity:
    """The value infinity on the projective j-line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

# j-invariants of the two noncuspidal rational points on X_0(14)
J14_VALUES = (-(3**3) * 5**3, 3**3 * 5**3 * 17**3)


def parameterize(u: int, v: int) -> tuple[int, int, int]:
    """(x, w, z) = (u(u^2-3v^2), v(3u^2-v^2), u^2+v^2), with x^2 + w^2 = z^3."""
    x = u * (u * u - 3 * v * v)
    w = v * (3 * u * u - v * v)
    z = u * u + v * v
    assert x * x + w * w == z**3
    return x, w, z


@dataclass(frozen=True)
class DescentWitness:
    """A coprime pair (u, v) with uv != 0, 3 | v and 2 | uv."""

    u: int
    v: int

    def __post_init__(self):
        u, v = self.u, self.v
        problems = []
        if u * v == 0:
            problems.append("uv = 0")
        if math.gcd(u, v) != 1:
            problems.append("gcd(u, v) != 1")
        if v % 3:
            problems.append("3 does not divide v")
        if (u * v) % 2:
            problems.append("uv is odd")
        if problems:
            raise ConstraintViolation(f"(u, v) = ({u}, {v}): " + ", ".join(problems))


def rad_s(n: int, excluded=frozenset()) -> int:
    """Product of the distinct primes dividing n that are not in ``excluded``."""
    if n == 0:
        raise ZeroArgument("rad_S(0) is undefined")
    return math.prod(q for q in factorize(abs(n)) if q not in excluded)


@dataclass(frozen=True)
class FreyData:
    """Frey curve Y^2 = X^3 + A X^2 + B X attached to (u, v), plus Δ/N bookkeeping.

    ``alpha_exp`` and ``beta_exp`` are the powers of 2 in the minimal
    discriminant and the conductor.  For odd u the integral model is not
    minimal at 2 (``minimal_at_2`` is False), so ``model_disc`` is 2^12 times
    the minimal discriminant there.
    """

    u: int
    v: int
    A: int
    B: int
    alpha_exp: int
    beta_exp: int
    model_disc: Fraction
    minimal_disc: Fraction
    conductor_radical: int
    minimal_at_2: bool

    @property
    def conductor(self) -> int:
        return 2**self.beta_exp * 3 * self.conductor_radical


def frey_curve(w: DescentWitness) -> FreyData:
    u, v = w.u, w.v
    if u % 2 == 0:
        A, B, alpha_exp, beta_exp, minimal_at_2 = 2 * u, v * v // 3, 6, 5, True
    else:
        A = u if u % 4 == 1 else -u
        B, alpha_exp, beta_exp, minimal_at_2 = v * v // 12, -12, 1, False
    model_disc = Fraction(16 * B * B * (A * A - 4 * B))
    core = v**4 * (3 * u * u - v * v)
    minimal_disc = Fraction(2) ** alpha_exp * Fraction(core, 27)
    if minimal_at_2:
        assert model_disc == minimal_disc
    else:
        assert model_disc == minimal_disc * 2**12
    return FreyData(
        u=u,
        v=v,
        A=A,
        B=B,
        alpha_exp=alpha_exp,
        beta_exp=beta_exp,
        model_disc=model_disc,
        minimal_disc=minimal_disc,
        conductor_radical=rad_s(v * (3 * u * u - v * v), {2, 3}),
        minimal_at_2=minimal_at_2,
    )


def _ratio(num: int, den: int):
    return INFINITY if den == 0 else Fraction(num, den)


def j_frey(u: int, v: int):
    """j-invariant of Y^2 = X^3 + 2uX^2 + (v^2/3)X, i.e. 1728(4u^2-v^2)^3 / (v^4(3u^2-v^2))."""
    return _ratio(1728 * (4 * u * u - v * v) ** 3, v**4 * (3 * u * u - v * v))


def j_frey_twist(u: int, v: int):
    """j-invariant of the 2-isogenous curve E': 1728(u^2+v^2)^3 / (v^2(3u^2-v^2)^2)."""
    den = v * v * (3 * u * u - v * v) ** 2
    j = _ratio(1728 * (u * u + v * v) ** 3, den)
    if j is not INFINITY:
        assert j == Fraction(1728 * u * u * (u * u - 3 * v * v) ** 2, den) + 1728
    return j


def j5_map(s: int, t: int):
    """The j-map X_0(5) -> X(1): (t^2+10st+5s^2)^3 / (s^5 t)."""
    if s == 0 and t == 0:
        raise BothZero("[s:t] = [0:0] is not a point of P^1")
    den = s**5 * t
    j = _ratio((t * t + 10 * s * t + 5 * s * s) ** 3, den)
    if j is not INFINITY:
        alt = Fraction((t * t + 4 * s * t - s * s) ** 2 * (t * t + 22 * s * t + 125 * s * s), den)
        assert j == alt + 1728
    return j


def x0_14_sanity(bound: int) -> bool:
    """True if no (u, v) with 0 < max(|u|, |v|) <= bound has j(E) or j(E') in J14_VALUES.

    A finite search, not a proof.  Both j-maps depend only on u^2 and v^2, so
    u, v >= 0 suffices; v = 0 and 3u^2 = v^2 are the excluded degenerate pairs.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    for u in range(bound + 1):
        uu = u * u
        for v in range(1, bound + 1):
            vv = v * v
            d = 3 * uu - vv
            if d == 0:
                continue
            num_e = 1728 * (4 * uu - vv) ** 3
            den_e = vv * vv * d
            num_t = 1728 * (uu + vv) ** 3
            den_t = vv * d * d
            for j in J14_VALUES:
                if num_e == j * den_e or num_t == j * den_t:
                    return False
    return True
