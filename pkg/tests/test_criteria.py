import random

import pytest
from hypothesis import given, settings, strategies as st

from fermat223 import criteria
from fermat223.criteria import (
    CriterionContext,
    KrausContext,
    SearchConfig,
    Unresolved,
    build_s,
    build_s_prime,
    check_chen,
    check_kraus3,
    check_mod6,
    check_sophie_germain,
    f7_anchor_table,
    iter_witnesses,
    mod7_contradiction_check,
    mod7_residues,
    resolve,
    search_witness,
    splits_in_z_sqrt3,
    unit_condition,
)
from fermat223.ecc import e_alpha, trace
from fermat223.errors import InvalidL, NotPrime
from fermat223.modarith import is_prime, legendre
from fermat223.selftest import brute_force_s

TABLE1 = {
    127: 28, 1852: 19, 2818: 1, 3146: 10, 3615: 9, 3764: 16, 4419: 18,
    5889: 25, 7994: 20, 8058: 0, 8330: 19, 10171: 18, 10561: 5,
}  # fmt: skip


def valid_pairs(max_p=5000, ls=(5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)):
    return [(l, k) for l in ls for k in range(1, max_p // l + 1) if is_prime(k * l + 1)]


def brute_force_s_prime(l, k, r3):
    p = k * l + 1
    c = pow(3 * r3, p - 2, p)
    mu = {z for z in range(1, p) if pow(z, k, p) == 1}
    return tuple(a for a in range(p) if (a - c) % p in mu and (a + c) % p in mu)


class TestContexts:
    def test_context(self):
        ctx = CriterionContext(31, 718)
        assert ctx.p == 22259 and ctx.field.p == 22259

    def test_context_rejects(self):
        with pytest.raises(NotPrime):
            CriterionContext(31, 717)
        for bad in (3, 4, 9, 1):
            with pytest.raises(InvalidL):
                CriterionContext(bad, 2)

    def test_kraus_context(self):
        kctx = KrausContext.from_context(CriterionContext(31, 718))
        assert kctx.r3**2 % 22259 == 3
        assert kctx.eps_f == (2 + kctx.r3) % 22259


class TestObstructionSets:
    def test_s_examples(self):
        assert len(build_s(CriterionContext(5, 2))) == 0
        assert len(build_s(CriterionContext(11, 2))) == 0
        assert pow(27, -1, 23) == 6 and legendre(7, 23) == legendre(5, 23) == -1

    def test_s_matches_brute_force(self):
        for l, k in valid_pairs():
            assert build_s(CriterionContext(l, k)).elements == brute_force_s(l, k), (l, k)

    def test_s_prime_table1(self):
        S = build_s_prime(KrausContext.from_context(CriterionContext(31, 718)))
        expected = sorted({a for a in TABLE1} | {22259 - a for a in TABLE1})
        assert list(S.elements) == expected and len(S) == 26

    def test_s_prime_matches_brute_force(self):
        for l, k in valid_pairs(max_p=3000):
            p = k * l + 1
            if legendre(3, p) != 1:
                continue
            kctx = KrausContext.from_context(CriterionContext(l, k))
            assert build_s_prime(kctx).elements == brute_force_s_prime(l, k, kctx.r3)

    def test_k1_contexts_cannot_exist(self):
        # p = l + 1 is even for odd l, so the k = 1 case of S' is vacuous
        for l in (5, 7, 11, 31):
            with pytest.raises(NotPrime):
                CriterionContext(l, 1)

    def test_subset_negation_and_root_choice_on_random_contexts(self):
        rng = random.Random(42)
        pairs = [(l, k) for l, k in valid_pairs(max_p=200_000, ls=(5, 7, 11, 13, 31, 37, 61, 101))
                 if legendre(3, k * l + 1) == 1]  # fmt: skip
        for l, k in rng.sample(pairs, 100):
            ctx = CriterionContext(l, k)
            p = ctx.p
            kctx = KrausContext.from_context(ctx)
            S, Sp = build_s(ctx), build_s_prime(kctx)
            assert set(Sp) <= set(S)
            for X in (S, Sp):
                assert {(p - a) % p for a in X} == set(X)
            other = build_s_prime(KrausContext.from_context(ctx, p - kctx.r3))
            assert other.elements == Sp.elements


class TestConditions:
    def test_splits(self):
        assert splits_in_z_sqrt3(22259)
        assert splits_in_z_sqrt3(11)
        assert not splits_in_z_sqrt3(5)

    def test_unit_condition(self):
        assert unit_condition(KrausContext.from_context(CriterionContext(31, 718)))
        kctx = KrausContext.from_context(CriterionContext(5, 2))
        assert kctx.r3 == 5 and (2 + 5) ** 2 % 11 == 5
        assert not unit_condition(kctx)

    def test_unit_condition_order_multiple(self):
        ctx = CriterionContext(31, 718)
        kctx = KrausContext.from_context(ctx)
        p = ctx.p
        order = next(d for d in range(1, p) if (p - 1) % d == 0 and pow(kctx.eps_f, d, p) == 1)
        assert ctx.k % order == 0


class TestChen:
    def test_l5(self):
        rep = check_chen(5, 2)
        assert rep.passed and rep.p == 11 and rep.a0_sq_mod_l == 1 and rep.set_size == 0

    def test_l5_k1(self):
        rep = check_chen(5, 1)
        assert not rep.passed and rep.failed_condition == 1

    def test_l31_no_small_witness(self):
        assert all(not check_chen(31, k).passed for k in range(1, 1001))

    def test_invalid_l(self):
        for bad in (2, 3, 4, 15):
            with pytest.raises(InvalidL):
                check_chen(bad, 2)

    def test_full_s_fails_where_kraus3_passes(self):
        rep = check_chen(31, 718)
        assert rep.failed_condition == 3 and not rep.passed
        assert check_kraus3(31, 718).passed

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([5, 7, 11, 13, 17, 19, 23, 29, 31, 37]), st.integers(1, 300))
    def test_pass_implies_invariants(self, l, k):
        rep = check_chen(l, k)
        if is_prime(k * l + 1):
            assert (rep.p + 1) ** 2 % l == 4 % l
        if rep.passed:
            assert rep.p % l == 1 and rep.a0_sq_mod_l != 4 % l
            assert all(t != rep.a0_sq_mod_l for _, t in rep.alpha_traces)
            assert len(rep.alpha_traces) == len([a for a in build_s(CriterionContext(l, k)) if a <= rep.p - a])
            field = CriterionContext(l, k).field
            for alpha, t in rep.alpha_traces:
                assert trace(e_alpha(field, alpha), method="naive").a_p_squared % l == t


class TestKraus3:
    def test_l31_k718(self):
        rep = check_kraus3(31, 718)
        assert rep.passed and rep.p == 22259 and rep.a0_sq_mod_l == 8
        assert dict(rep.alpha_traces) == TABLE1
        assert all(t != 8 for t in TABLE1.values())

    def test_l31_k10_fails_late(self):
        rep = check_kraus3(31, 10)
        assert is_prime(311) and not rep.passed and rep.failed_condition > 1

    def test_l31_k717(self):
        rep = check_kraus3(31, 717)
        assert rep.failed_condition == 1 and 717 * 31 + 1 == 22228


class TestShortcuts:
    def test_sophie_l5(self):
        rep = check_sophie_germain(5)
        assert rep.passed and rep.p == 11
        assert legendre(11, 7) == 1 and legendre(11, 13) == -1

    def test_sophie_l7(self):
        rep = check_sophie_germain(7)
        assert not rep.passed and rep.failed_condition == 1

    def test_sophie_l11(self):
        rep = check_sophie_germain(11)
        assert rep.passed and rep.p == 23
        assert len(build_s(CriterionContext(11, 2))) == 0

    def test_sophie_equivalence(self):
        for l in range(5, 10_000):
            if is_prime(l) and is_prime(2 * l + 1):
                assert check_sophie_germain(l).passed == (len(brute_force_s(l, 2)) == 0), l

    def test_mod6(self):
        assert check_mod6(5).passed
        assert not check_mod6(31).passed
        rep = check_mod6(1000003)
        assert rep.passed == (1000003 % 6 == 5) and rep.k == rep.p == 0

    def test_mod7(self):
        assert mod7_residues(5) == [3] and mod7_contradiction_check(5)
        assert mod7_residues(13) == [1] and not mod7_contradiction_check(13)
        assert mod7_contradiction_check(11)
        squares = {x * x % 7 for x in range(7)}
        assert squares == {0, 1, 2, 4} and 3 not in squares

    def test_f7_anchor(self):
        rows = {alpha: (t, diff) for alpha, t, diff in f7_anchor_table()}
        assert rows[1][1] == rows[6][1] == 0
        assert rows[0] == (0, 16)
        assert all(rows[a][1] in (12, 16) for a in (0, 2, 3, 4, 5))


class TestSearch:
    def test_l5(self):
        assert search_witness(5, 10, ["chen"]).k == 2

    def test_l31_kraus3_witnesses(self):
        assert [r.k for r in iter_witnesses(31, 3000, ["kraus3"])] == [718, 2542]

    def test_l7_small(self):
        assert search_witness(7, 2000, ["chen", "kraus3"]) is None

    def test_bad_kinds(self):
        with pytest.raises(ValueError):
            search_witness(5, 10, ["mod6"])

    def test_resolve(self):
        assert resolve(5).kind == "mod6"
        rep = resolve(31, SearchConfig(k_max=800))
        assert rep.kind == "kraus3" and rep.k == 718
        rep = resolve(7, SearchConfig(k_max=500))
        assert isinstance(rep, Unresolved) and rep.note and not rep.passed

    def test_search_config_validation(self):
        for kwargs in ({"k_max": 0}, {"threads": 0}, {"l_from": 10, "l_to": 5}, {"kinds": ()}):
            with pytest.raises(ValueError):
                SearchConfig(**kwargs)

    def test_render(self):
        text = check_kraus3(31, 718).render()
        assert "127 | 28" in text and "PASSED" in text
        assert "S empty" in check_chen(5, 2).render()


def test_wrong_constant_breaks_s(monkeypatch):
    monkeypatch.setattr(criteria, "one_over_27", lambda field: field.inv(26))
    assert build_s(CriterionContext(7, 10)).elements != brute_force_s(7, 10)
