"""Elliptic curves Y^2 = X^3 + aX^2 + bX + c over prime fields.

Point counting has two routes with one contract: an exact character sum over
all x (vectorised with numpy) and a baby-step giant-step group-order search
inside the Hasse window.  ``trace`` picks between them by the size of p.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularAlpha, SingularCurve
from .modarith import PrimeField, Residue, legendre

__all__ = [
    "NAIVE_LIMIT",
    "CurveFp",
    "TraceResult",
    "count_points_bsgs",
    "count_points_naive",
    "curve_discriminant",
    "e0_curve",
    "e_alpha",
    "trace",
    "trace_sq_e0",
]

# auto-dispatch threshold between the character sum and BSGS
NAIVE_LIMIT = 200_000
# numpy int64 Horner evaluation stays exact below this modulus
_NUMPY_LIMIT = 1 << 31


@dataclass(frozen=True)
class CurveFp:
    """Y^2 = X^3 + a X^2 + b X + c over ``field``; a, b, c are reduced ints."""

    field: PrimeField
    a: int
    b: int
    c: int = 0

    def __post_init__(self):
        p = self.field.p
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, int(getattr(self, name)) % p)
        if curve_discriminant(self) == 0:
            raise SingularCurve(f"singular curve: {self}")

    @property
    def p(self) -> int:
        return self.field.p

    def rhs(self, x: int) -> int:
        p = self.field.p
        return (((x + self.a) * x + self.b) * x + self.c) % p

    def twist(self, d: int) -> CurveFp:
        """Quadratic twist d*Y^2 = f(X), rewritten in the same monic shape."""
        p = self.field.p
        return CurveFp(self.field, self.a * d % p, self.b * d * d % p, self.c * d * d * d % p)

    def __str__(self):
        return f"Y^2 = X^3 + {self.a}X^2 + {self.b}X + {self.c} over F_{self.field.p}"


@dataclass(frozen=True)
class TraceResult:
    a_p: int
    point_count: int
    p: int

    def __post_init__(self):
        if self.point_count != self.p + 1 - self.a_p:
            raise ValueError("point_count must equal p + 1 - a_p")
        if self.a_p * self.a_p > 4 * self.p:
            raise ValueError(f"a_p={self.a_p} violates the Hasse bound for p={self.p}")

    @property
    def a_p_squared(self) -> int:
        return self.a_p * self.a_p


def _discriminant(p: int, a: int, b: int, c: int) -> int:
    return (-16 * (4 * a**3 * c - a * a * b * b - 18 * a * b * c + 4 * b**3 + 27 * c * c)) % p


def curve_discriminant(C: CurveFp) -> Residue:
    """Discriminant of the model; zero exactly when the cubic has a repeated root."""
    return Residue(_discriminant(C.field.p, C.a, C.b, C.c), C.field)


@lru_cache(maxsize=8)
def _chi_table(p: int) -> np.ndarray:
    chi = np.full(p, -1, dtype=np.int8)
    half = np.arange((p + 1) // 2, dtype=np.int64)
    chi[half * half % p] = 1
    chi[0] = 0
    return chi


def _character_sum(p: int, a: int, b: int, c: int) -> int:
    if p >= _NUMPY_LIMIT:
        return sum(legendre(((x + a) * x + b) * x + c, p) for x in range(p))
    x = np.arange(p, dtype=np.int64)
    f = (x + a) % p
    f = (f * x + b) % p
    f = (f * x + c) % p
    return int(_chi_table(p)[f].sum(dtype=np.int64))


def count_points_naive(C: CurveFp) -> TraceResult:
    """Projective point count from the quadratic character summed over every x."""
    p = C.field.p
    s = _character_sum(p, C.a, C.b, C.c)
    return TraceResult(a_p=-s, point_count=p + 1 + s, p=p)


# -- group-order search ------------------------------------------------------
# Points are (x, y) tuples in affine coordinates; None is the point at infinity.


def _add(P, Q, a, b, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a * x1 + b) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - a - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _neg(P, p):
    return None if P is None else (P[0], (-P[1]) % p)


def _mul(n, P, a, b, p):
    if n < 0:
        n, P = -n, _neg(P, p)
    R = None
    while n:
        if n & 1:
            R = _add(R, P, a, b, p)
        P = _add(P, P, a, b, p)
        n >>= 1
    return R


def _random_point(C: CurveFp, rng: random.Random):
    p = C.field.p
    while True:
        x = rng.randrange(p)
        f = C.rhs(x)
        if f == 0:
            return x, 0
        if legendre(f, p) == 1:
            y = C.field.sqrt(f)
            return x, (y if rng.random() < 0.5 else p - y)


def _annihilators(C: CurveFp, P, lo: int, hi: int) -> set[int]:
    """All m in [lo, hi] with m*P = O, by baby-step giant-step."""
    a, b, p = C.a, C.b, C.field.p
    width = hi - lo + 1
    step = math.isqrt(width) + 1
    baby = {}
    R = None
    for j in range(step):
        if j and R is None:
            # P has order j < step: every multiple of j in the window qualifies
            first = -(-lo // j) * j
            return set(range(first, hi + 1, j))
        baby.setdefault(R, j)
        R = _add(R, P, a, b, p)
    giant = _neg(R, p)  # -(step * P)
    Q = _neg(_mul(lo, P, a, b, p), p)
    found = set()
    for i in range(width // step + 1):
        j = baby.get(Q)
        if j is not None:
            m = lo + i * step + j
            if m <= hi:
                found.add(m)
        Q = _add(Q, giant, a, b, p)
    return found


def _order_candidates(C: CurveFp, lo: int, hi: int, rng: random.Random, tries: int) -> set[int]:
    cand = set(range(lo, hi + 1))
    for _ in range(tries):
        cand &= _annihilators(C, _random_point(C, rng), lo, hi)
        if len(cand) <= 1:
            break
    return cand


def count_points_bsgs(C: CurveFp, tries: int = 8) -> TraceResult:
    """Group order via BSGS over the Hasse window.

    Random points narrow the candidate set until one order is left.  If the
    group exponent is too small for that, the quadratic twist (whose order is
    2p + 2 - #E) is searched too; a residual ambiguity falls back to the
    character sum.
    """
    p = C.field.p
    bound = math.isqrt(4 * p)
    lo, hi = p + 1 - bound, p + 1 + bound
    rng = random.Random(hash((p, C.a, C.b, C.c)))
    cand = _order_candidates(C, lo, hi, rng, tries)
    if len(cand) > 1:
        d = 2
        while legendre(d, p) != -1:
            d += 1
        twist_cand = _order_candidates(C.twist(d), lo, hi, rng, tries)
        cand &= {2 * p + 2 - n for n in twist_cand}
    if len(cand) != 1:
        return count_points_naive(C)
    (n,) = cand
    return TraceResult(a_p=p + 1 - n, point_count=n, p=p)


def trace(C: CurveFp, method: str = "auto") -> TraceResult:
    """Exact trace of Frobenius; ``method`` is ``auto``, ``naive`` or ``bsgs``."""
    if method == "auto":
        method = "naive" if C.field.p < NAIVE_LIMIT else "bsgs"
    if method == "naive":
        return count_points_naive(C)
    if method == "bsgs":
        return count_points_bsgs(C)
    raise ValueError(f"unknown trace method {method!r}")


def e0_curve(field: PrimeField, sign: int = 1) -> CurveFp:
    """Reduction of the conductor-96 curve Y^2 = X^3 + sign*X^2 - 2X."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return CurveFp(field, sign, -2, 0)


@lru_cache(maxsize=4096)
def _trace_sq_e0(p: int) -> int:
    field = PrimeField(p)
    t = trace(e0_curve(field, 1)).a_p_squared
    if __debug__ and p < NAIVE_LIMIT:
        assert trace(e0_curve(field, -1)).a_p_squared == t
    return t


def trace_sq_e0(field: PrimeField) -> int:
    """a_p(E_0)^2, which does not depend on the choice of conductor-96 curve."""
    return _trace_sq_e0(field.p)


def e_alpha(field: PrimeField, alpha) -> CurveFp:
    """E_alpha: Y^2 = X^3 + 2*alpha*X^2 + X/27."""
    p = field.p
    alpha = int(alpha) % p
    c27 = field.inv(27)
    if alpha * alpha % p == c27:
        raise SingularAlpha(f"alpha={alpha} has alpha^2 = 1/27 in F_{p}")
    return CurveFp(field, 2 * alpha, c27, 0)
