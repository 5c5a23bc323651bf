"""Embedded invariant suites run by ``fermat223 selftest``.

Each suite raises AssertionError naming the first broken invariant.  The
oracles here deliberately recompute their constants instead of reusing the
ones inside :mod:`fermat223.criteria`.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import criteria
from .descent import (
    INFINITY,
    DescentWitness,
    frey_curve,
    j5_map,
    j_frey_twist,
    parameterize,
    x0_14_sanity,
)
from .ecc import CurveFp, count_points_naive, e0_curve, trace_sq_e0
from .modarith import PrimeField, is_prime, legendre

SUITES = {}


def suite(name):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


def brute_force_s(l: int, k: int) -> tuple[int, ...]:
    """S_{k,p} by scanning every alpha in F_p; O(p log p)."""
    p = k * l + 1
    c = pow(27, p - 2, p)
    return tuple(a for a in range(p) if pow((a * a - c) % p, k, p) == 1)


def small_contexts(limit: int = 5000):
    for l in (5, 7, 11, 13, 19, 31, 37, 43):
        for k in range(2, limit // l + 1, 2):
            if is_prime(k * l + 1):
                yield l, k


@suite("s_oracle")
def check_s_oracle():
    for l, k in small_contexts():
        fast = criteria.build_s(criteria.CriterionContext(l, k)).elements
        assert fast == brute_force_s(l, k), f"S_{{{k},{k * l + 1}}} differs from the brute-force scan"


@suite("f7_anchor")
def check_f7_anchor():
    rows = criteria.f7_anchor_table()
    for alpha, _, diff in rows:
        expected = {0} if alpha in (1, 6) else {12, 16}
        assert diff in expected, f"alpha={alpha}: diff {diff} not in {expected}"


@suite("descent")
def check_descent(n: int = 2000, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(n):
        u, v = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        x, w, z = parameterize(u, v)
        assert x * x + w * w == z**3, f"parameterization fails at {(u, v)}"
        if v and 3 * u * u != v * v:
            j = j_frey_twist(u, v)
            assert j is not INFINITY
        s, t = rng.randint(-50, 50), rng.randint(-50, 50)
        if s or t:
            j5_map(s, t)
    checked = 0
    while checked < 200:
        u, v = rng.randint(-500, 500), 3 * rng.randint(-300, 300)
        try:
            data = frey_curve(DescentWitness(u, v))
        except ValueError:
            continue
        checked += 1
        if u % 2 == 0:
            assert data.model_disc == Fraction(2**6 * v**4 * (3 * u * u - v * v), 27)
    assert x0_14_sanity(100), "a pair with j = j_14 was found"
    for p in (q for q in range(5, 200) if is_prime(q)):
        F = PrimeField(p)
        t = count_points_naive(CurveFp(F, 4, 3, 0)).a_p_squared
        assert t == trace_sq_e0(F), f"Frey curve of (2, 3) disagrees with E_0 at p={p}"


@suite("sophie_germain")
def check_sophie_germain_equivalence(limit: int = 10_000):
    for l in range(5, limit):
        if not is_prime(l) or not is_prime(2 * l + 1):
            continue
        p = 2 * l + 1
        sign = -1 if ((l + 1) // 2) % 2 else 1
        legendre_ok = legendre(p, 7) == 1 and legendre(p, 13) == sign
        empty = not _s2_nonempty(p)
        assert legendre_ok == empty, f"Legendre conditions and S_(2,{p}) = ∅ disagree for l={l}"


def _s2_nonempty(p: int) -> bool:
    # alpha^2 - 1/27 = ±1 has a solution iff 1/27 + 1 or 1/27 - 1 is a square
    c = pow(27, p - 2, p)
    return any(legendre((c + e) % p, p) != -1 for e in (1, -1))


@suite("twist")
def check_twist(limit: int = 10_000):
    for p in range(5, limit + 1):
        if is_prime(p):
            F = PrimeField(p)
            plus = count_points_naive(e0_curve(F, 1)).a_p_squared
            minus = count_points_naive(e0_curve(F, -1)).a_p_squared
            assert plus == minus, f"the two conductor-96 models disagree at p={p}"


@suite("mod7")
def check_mod7():
    assert criteria.mod7_residues(5) == [3]
    assert legendre(3, 7) == -1
    for l in range(5, 2000):
        if is_prime(l):
            assert criteria.mod7_contradiction_check(l) == (l % 6 == 5), f"l={l}"


def run(names=None, out=print) -> list[str]:
    """Run the named suites (all by default); returns the names that failed."""
    failed = []
    for name in names or SUITES:
        try:
            SUITES[name]()
        except Exception as exc:  # a crash inside a suite is a failure of that suite
            failed.append(name)
            out(f"{name}: FAIL ({exc})")
        else:
            out(f"{name}: PASS")
    return failed
