import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fermat223.descent import (
    INFINITY,
    J14_VALUES,
    DescentWitness,
    frey_curve,
    j5_map,
    j_frey,
    j_frey_twist,
    parameterize,
    rad_s,
    x0_14_sanity,
)
from fermat223.ecc import CurveFp, trace, trace_sq_e0
from fermat223.errors import BothZero, ConstraintViolation, ZeroArgument
from fermat223.modarith import PrimeField, is_prime


def generic_j(A, B):
    """j-invariant of Y^2 = X^3 + AX^2 + BX from c4 and the discriminant."""
    A, B = Fraction(A), Fraction(B)
    return 256 * (A * A - 3 * B) ** 3 / (B * B * (A * A - 4 * B))


def test_parameterize_examples():
    assert parameterize(2, 3) == (-46, 9, 13)
    assert (-46) ** 2 + 9**2 == 2197 == 13**3
    assert parameterize(1, 0) == (1, 0, 1)
    assert parameterize(0, 1) == (0, -1, 1)


def test_parameterization_identity_random():
    rng = random.Random(0)
    for _ in range(10_000):
        u, v = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        x, w, z = parameterize(u, v)
        assert x * x + w * w == z**3


def test_frey_examples():
    d = frey_curve(DescentWitness(2, 3))
    assert (d.A, d.B) == (4, 3)
    assert d.model_disc == 576 == Fraction(2**6 * 3**4 * (12 - 9), 27)
    assert d.alpha_exp == 6 and d.beta_exp == 5 and d.conductor == 96
    d = frey_curve(DescentWitness(1, 6))
    assert (d.A, d.B) == (1, 3)
    assert d.alpha_exp == -12 and d.beta_exp == 1 and not d.minimal_at_2


def test_frey_odd_u_sign_choice():
    d = frey_curve(DescentWitness(-1, 6))
    assert d.A == 1 and d.A % 4 == 1
    d = frey_curve(DescentWitness(7, 12))
    assert d.A == -7 and d.A % 4 == 1


@pytest.mark.parametrize("u, v", [(0, 3), (2, 0), (4, 6), (2, 5), (1, 3)])
def test_witness_constraints(u, v):
    with pytest.raises(ConstraintViolation):
        DescentWitness(u, v)


def _coprime_witness(pair):
    # u prime to 3 and t reduced by gcd(u, t) make (u, 3t) coprime; doubling u fixes parity
    u, t = pair
    g = math.gcd(u, t)
    u, t = u // g, t // g
    if u % 2 and t % 2:
        u *= 2
    return u, 3 * t


nonzero = st.integers(-10**4, 10**4).filter(bool)
witnesses = st.tuples(nonzero.filter(lambda n: n % 3), st.integers(-3000, 3000).filter(bool)).map(_coprime_witness)


@given(witnesses)
def test_frey_integrality_and_discriminant(uv):
    u, v = uv
    d = frey_curve(DescentWitness(u, v))
    assert isinstance(d.A, int) and isinstance(d.B, int)
    assert d.model_disc == 16 * d.B**2 * (d.A**2 - 4 * d.B)
    if u % 2 == 0:
        assert d.model_disc == Fraction(2**6 * v**4 * (3 * u * u - v * v), 27)
        assert (d.A, d.B * 3) == (2 * u, v * v)
    else:
        assert d.B * 12 == v * v and d.A % 4 == 1
    assert d.minimal_disc == Fraction(2) ** d.alpha_exp * Fraction(v**4 * (3 * u * u - v * v), 27)
    # j is a function of u/v only and does not depend on the model
    assert generic_j(d.A, d.B) == j_frey(u, v)


def test_frey_discriminant_random_batch():
    rng = random.Random(1)
    done = 0
    while done < 1000:
        u, v = 2 * rng.randint(-500, 500), 3 * rng.randint(-500, 500)
        try:
            d = frey_curve(DescentWitness(u, v))
        except ConstraintViolation:
            continue
        done += 1
        assert 16 * d.B**2 * (d.A**2 - 4 * d.B) == Fraction(2**6 * v**4 * (3 * u * u - v * v), 27)


def test_rad_s():
    assert rad_s(480, {2, 3}) == 5
    assert rad_s(1, {2, 3}) == rad_s(-1, {2, 3}) == 1
    assert rad_s(12) == 6
    with pytest.raises(ZeroArgument):
        rad_s(0)


def test_j_frey_twist_examples():
    assert j_frey_twist(2, 3) == Fraction(1728 * 13**3, 81)
    assert j_frey_twist(1, 0) is INFINITY
    # uv(u^2 - 3v^2) = 0 with v(3u^2 - v^2) != 0 gives exactly 1728
    assert j_frey_twist(0, 1) == 1728


def test_j_frey_twist_is_j_of_isogenous_model():
    # E': Y^2 = X^3 - 6uX^2 + 3(3u^2 - v^2)X
    for u, v in [(2, 3), (4, 9), (-10, 21), (1, 6)]:
        assert generic_j(-6 * u, 3 * (3 * u * u - v * v)) == j_frey_twist(u, v)


def test_j5_examples():
    assert j5_map(1, 0) is INFINITY
    assert j5_map(0, 1) is INFINITY
    assert j5_map(1, 1) == 4096 == 16**3 == 4**2 * 148 + 1728
    with pytest.raises(BothZero):
        j5_map(0, 0)


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_j_maps_double_forms_agree(a, b):
    # both functions assert agreement of their two displayed forms internally
    if b and 3 * a * a != b * b:
        j1 = j_frey_twist(a, b)
        assert j1 == Fraction(1728 * a * a * (a * a - 3 * b * b) ** 2, b * b * (3 * a * a - b * b) ** 2) + 1728
    if a and b:
        j2 = j5_map(a, b)
        alt = Fraction((b * b + 4 * a * b - a * a) ** 2 * (b * b + 22 * a * b + 125 * a * a), a**5 * b)
        assert j2 == alt + 1728


def test_x0_14_sanity():
    assert J14_VALUES == (-3375, 3**3 * 5**3 * 17**3)
    assert x0_14_sanity(1)
    assert x0_14_sanity(100)


def test_x0_14_sanity_large():
    assert x0_14_sanity(1000)


def test_x0_14_sanity_can_fail():
    # j = 1728 has solutions (u = 0): the search itself must be able to detect a hit
    import fermat223.descent as descent

    original = descent.J14_VALUES
    try:
        descent.J14_VALUES = (1728,)
        assert not descent.x0_14_sanity(5)
    finally:
        descent.J14_VALUES = original


def test_reduction_consistency_of_frey_2_3():
    d = frey_curve(DescentWitness(2, 3))
    primes = [p for p in range(5, 400) if is_prime(p)][:20]
    for p in primes:
        F = PrimeField(p)
        assert trace(CurveFp(F, d.A, d.B, 0)).a_p_squared == trace_sq_e0(F)
