"""Criteria ruling out solutions of x^2 + y^(2l) = z^3 for a prime exponent l > 3.

Each ``check_*`` function evaluates the conditions of one criterion in their
natural order and stops at the first failure.  The obstruction sets are built
from the k-th roots of unity, never by scanning all of F_p.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Optional, Union

from .ecc import e_alpha, trace, trace_sq_e0
from .errors import InvalidL, NonResidue, NotPrime
from .modarith import ObstructionSet, PrimeField, is_prime, legendre, mu_k

log = logging.getLogger(__name__)

__all__ = [
    "KINDS",
    "SEARCH_KINDS",
    "CriterionContext",
    "CriterionReport",
    "KrausContext",
    "SearchConfig",
    "Unresolved",
    "build_s",
    "build_s_prime",
    "check",
    "check_chen",
    "check_kraus3",
    "check_mod6",
    "check_sophie_germain",
    "f7_anchor_table",
    "iter_witnesses",
    "mod7_contradiction_check",
    "mod7_residues",
    "one_over_27",
    "resolve",
    "search_witness",
    "splits_in_z_sqrt3",
    "unit_condition",
    "validate_l",
]

KINDS = ("chen", "kraus3", "sophie_germain", "mod6")
SEARCH_KINDS = ("chen", "kraus3")

L7_NOTE = (
    "l=7 admits no witness for either criterion in any search so far; it is "
    "settled instead by the complete solution of a^2 + b^3 = c^7, where -c is never a square"
)


def validate_l(l) -> int:
    if isinstance(l, bool) or not isinstance(l, int) or l <= 3 or not is_prime(l):
        raise InvalidL(f"l must be a prime > 3, got {l!r}")
    return l


def one_over_27(field: PrimeField) -> int:
    return field.inv(27)


@dataclass(frozen=True)
class CriterionContext:
    """Exponent l, multiplier k and the prime p = k*l + 1."""

    l: int
    k: int

    def __post_init__(self):
        validate_l(self.l)
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if not is_prime(self.p):
            raise NotPrime(f"p = {self.k}*{self.l} + 1 = {self.p} is not prime")

    @property
    def p(self) -> int:
        return self.k * self.l + 1

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)


@dataclass(frozen=True)
class KrausContext:
    """A context where p splits in Z[sqrt 3], with sqrt 3 and 2 + sqrt 3 reduced mod p."""

    base: CriterionContext
    r3: int
    eps_f: int

    @classmethod
    def from_context(cls, base: CriterionContext, r3: Optional[int] = None) -> KrausContext:
        field = base.field
        if r3 is None:
            if legendre(3, field.p) != 1:
                raise NonResidue(f"3 is not a square modulo {field.p}")
            r3 = field.sqrt(3)
        return cls(base, r3 % field.p, (2 + r3) % field.p)

    def __post_init__(self):
        p = self.base.p
        if self.r3 * self.r3 % p != 3:
            raise ValueError(f"r3={self.r3} is not a square root of 3 modulo {p}")
        if self.eps_f == 0:
            raise ValueError("2 + r3 must be invertible")


def build_s(ctx: CriterionContext) -> ObstructionSet:
    """S_{k,p}: all alpha with alpha^2 - 1/27 a k-th root of unity."""
    field = ctx.field
    p = field.p
    c = one_over_27(field)
    elements = []
    for zeta in mu_k(field, ctx.k):
        t = (zeta + c) % p
        if legendre(t, p) == -1:
            continue
        r = field.sqrt(t)
        elements.append(r)
        if r:
            elements.append(p - r)
    return ObstructionSet("S", field, tuple(sorted(elements)), context=f"l={ctx.l},k={ctx.k}")


def build_s_prime(kctx: KrausContext) -> ObstructionSet:
    """S'_{k,p} = (mu_k + 1/(3 r3)) ∩ (mu_k - 1/(3 r3))."""
    ctx = kctx.base
    field = ctx.field
    p = field.p
    c = field.inv(3 * kctx.r3)
    roots = mu_k(field, ctx.k).elements
    plus = {(z + c) % p for z in roots}
    elements = sorted(a for a in ((z - c) % p for z in roots) if a in plus)
    return ObstructionSet("Sprime", field, tuple(elements), context=f"l={ctx.l},k={ctx.k}")


def splits_in_z_sqrt3(p: int) -> bool:
    if p <= 3:
        raise ValueError("p must be a prime > 3")
    return legendre(3, p) == 1


def unit_condition(kctx: KrausContext) -> bool:
    """Whether (2 + sqrt 3)^k is 1 modulo the chosen prime above p."""
    p, k = kctx.base.p, kctx.base.k
    holds = pow(kctx.eps_f, k, p) == 1
    if __debug__:
        # 2 - r3 is the inverse of 2 + r3, so both have the same order
        assert (pow((2 - kctx.r3) % p, k, p) == 1) == holds
    return holds


@dataclass
class CriterionReport:
    """Outcome of one criterion evaluation.

    ``k`` and ``p`` are 0 for criteria that need no witness.  ``alpha_traces``
    lists (alpha, a_p(E_alpha)^2 mod l) for the smaller alpha of each ±alpha
    class that was examined; after a failure at the last condition it stops at
    the offending alpha.
    """

    kind: str
    l: int
    k: int = 0
    p: int = 0
    passed: bool = False
    failed_condition: Optional[int] = None
    a0_sq_mod_l: Optional[int] = None
    set_size: int = 0
    alpha_traces: list = dc_field(default_factory=list)
    set_digest: str = ""
    conditions: list = dc_field(default_factory=list)

    def _record(self, description: str, ok: bool) -> bool:
        self.conditions.append((description, ok))
        if not ok:
            self.failed_condition = len(self.conditions)
        return ok

    def _pass(self) -> CriterionReport:
        self.passed = True
        self.failed_condition = None
        return self

    def render(self) -> str:
        head = f"criterion {self.kind}: l={self.l}"
        if self.k:
            head += f" k={self.k} p={self.p}"
        lines = [head]
        for i, (desc, ok) in enumerate(self.conditions, 1):
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {i}. {desc}")
        if self.a0_sq_mod_l is not None:
            lines.append(f"  a_p(E0)^2 mod {self.l} = {self.a0_sq_mod_l}")
        if self.kind in SEARCH_KINDS and self.failed_condition is None:
            if self.set_size == 0:
                lines.append("  S empty" if self.kind == "chen" else "  S' empty")
            else:
                lines.append(f"  set size {self.set_size}; ±alpha | a_p(E_alpha)^2 mod l")
                lines += [f"  {a} | {t}" for a, t in self.alpha_traces]
        lines.append("PASSED" if self.passed else f"FAILED at condition {self.failed_condition}")
        return "\n".join(lines)


def _a0_condition(rep: CriterionReport, field: PrimeField) -> bool:
    l, p = rep.l, field.p
    assert (p + 1) ** 2 % l == 4 % l
    rep.a0_sq_mod_l = trace_sq_e0(field) % l
    return rep._record(
        f"a_p(E0)^2 = {rep.a0_sq_mod_l} != 4 (mod {l})", rep.a0_sq_mod_l != 4 % l
    )


def _alpha_condition(rep: CriterionReport, field: PrimeField, S: ObstructionSet, label: str) -> bool:
    l, p, a0 = rep.l, field.p, rep.a0_sq_mod_l
    rep.set_size = len(S)
    rep.set_digest = S.digest()
    for alpha in S.representatives():
        t = trace(e_alpha(field, alpha)).a_p_squared % l
        rep.alpha_traces.append((alpha, t))
        if t == a0:
            return rep._record(
                f"a_p(E_alpha)^2 != a_p(E0)^2 (mod {l}) for all alpha in {label}"
                f" (alpha={alpha} gives {t})",
                False,
            )
    for alpha, t in rep.alpha_traces:
        if alpha:
            partner = trace(e_alpha(field, p - alpha)).a_p_squared % l
            assert partner == t, f"E_{alpha} and E_{p - alpha} disagree"
    return rep._record(
        f"a_p(E_alpha)^2 != a_p(E0)^2 (mod {l}) for all {len(S)} alpha in {label}", True
    )


def _prime_condition(rep: CriterionReport) -> bool:
    return rep._record(f"p = {rep.k}*{rep.l}+1 = {rep.p} is prime", is_prime(rep.p))


def check_chen(l: int, k: int) -> CriterionReport:
    """The three-condition criterion over the full set S_{k,p}."""
    validate_l(l)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    rep = CriterionReport("chen", l, k, k * l + 1)
    if not _prime_condition(rep):
        return rep
    ctx = CriterionContext(l, k)
    field = ctx.field
    if not _a0_condition(rep, field):
        return rep
    if not _alpha_condition(rep, field, build_s(ctx), "S_{k,p}"):
        return rep
    return rep._pass()


def check_kraus3(l: int, k: int) -> CriterionReport:
    """The five-condition criterion using the splitting of p in Z[sqrt 3]."""
    validate_l(l)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    rep = CriterionReport("kraus3", l, k, k * l + 1)
    if not _prime_condition(rep):
        return rep
    ctx = CriterionContext(l, k)
    field = ctx.field
    if not rep._record(f"p = {rep.p} splits in Z[sqrt 3]", splits_in_z_sqrt3(rep.p)):
        return rep
    kctx = KrausContext.from_context(ctx)
    if not rep._record(f"(2 + sqrt 3)^{k} = 1 (mod p)", unit_condition(kctx)):
        return rep
    if not _a0_condition(rep, field):
        return rep
    S = build_s_prime(kctx)
    if __debug__:
        assert S.elements == build_s_prime(KrausContext.from_context(ctx, rep.p - kctx.r3)).elements
    if not _alpha_condition(rep, field, S, "S'_{k,p}"):
        return rep
    return rep._pass()


def check_sophie_germain(l: int) -> CriterionReport:
    """The k = 2 shortcut: 2l+1 prime, (p/7) = 1 and (p/13) = (-1)^((l+1)/2)."""
    validate_l(l)
    p = 2 * l + 1
    rep = CriterionReport("sophie_germain", l, 2, p)
    if not _prime_condition(rep):
        return rep
    if not rep._record(f"({p}/7) = 1", legendre(p, 7) == 1):
        return rep
    sign = -1 if ((l + 1) // 2) % 2 else 1
    if not rep._record(f"({p}/13) = {sign:+d}", legendre(p, 13) == sign):
        return rep
    field = PrimeField(p)
    rep.a0_sq_mod_l = trace_sq_e0(field) % l
    if __debug__:
        assert len(build_s(CriterionContext(l, 2))) == 0
        assert rep.a0_sq_mod_l != 4 % l
    rep.set_digest = ObstructionSet("S", field, (), context=f"l={l},k=2").digest()
    return rep._pass()


def check_mod6(l: int) -> CriterionReport:
    validate_l(l)
    rep = CriterionReport("mod6", l)
    if rep._record(f"l = {l} = -1 (mod 6)", l % 6 == 5):
        return rep._pass()
    return rep


def check(kind: str, l: int, k: int = 0) -> CriterionReport:
    """Dispatch to the named criterion; ``k`` is ignored by the witness-free ones."""
    if kind == "chen":
        return check_chen(l, k)
    if kind == "kraus3":
        return check_kraus3(l, k)
    if kind == "sophie_germain":
        return check_sophie_germain(l)
    if kind == "mod6":
        return check_mod6(l)
    raise ValueError(f"unknown criterion {kind!r}")


def f7_anchor_table() -> list[tuple[int, int, int]]:
    """(alpha, a_7(E_alpha)^2, a_7(E_0)^2 - a_7(E_alpha)^2) for every alpha in F_7."""
    field = PrimeField(7)
    a0 = trace_sq_e0(field)
    rows = []
    for alpha in range(7):
        t = trace(e_alpha(field, alpha)).a_p_squared
        diff = a0 - t
        if alpha in (1, 6):
            assert diff == 0, (alpha, diff)
        else:
            assert diff in (12, 16), (alpha, diff)
        rows.append((alpha, t, diff))
    return rows


def mod7_residues(l: int) -> list[int]:
    """Residues s/r^2 - 1 mod 7 compatible with (s/r^2)^l = 2 (mod 7)."""
    return sorted((x - 1) % 7 for x in range(1, 7) if pow(x, l, 7) == 2)


def mod7_contradiction_check(l: int) -> bool:
    """Whether every residue from :func:`mod7_residues` is a non-square mod 7."""
    validate_l(l)
    residues = mod7_residues(l)
    return bool(residues) and all(legendre(r, 7) == -1 for r in residues)


def _search_order(kinds: Iterable[str]) -> tuple[str, ...]:
    kinds = set(kinds)
    unknown = kinds - set(SEARCH_KINDS)
    if unknown or not kinds:
        raise ValueError(f"search criteria must be a non-empty subset of {SEARCH_KINDS}")
    return tuple(kind for kind in SEARCH_KINDS if kind in kinds)


def iter_witnesses(l: int, k_max: int, kinds: Iterable[str] = SEARCH_KINDS, k_min: int = 1) -> Iterator[CriterionReport]:
    """Passing reports for k = k_min..k_max in ascending order, at most one per k."""
    validate_l(l)
    if k_max < 1:
        raise ValueError("k_max must be positive")
    order = _search_order(kinds)
    for k in range(max(k_min, 1), k_max + 1):
        if not is_prime(k * l + 1):
            continue
        for kind in order:
            rep = check(kind, l, k)
            if rep.passed:
                yield rep
                break


def search_witness(l: int, k_max: int, kinds: Iterable[str] = SEARCH_KINDS) -> Optional[CriterionReport]:
    """The passing report with the smallest k <= k_max, or None."""
    return next(iter_witnesses(l, k_max, kinds), None)


@dataclass(frozen=True)
class SearchConfig:
    k_max: int = 2000
    kinds: tuple = SEARCH_KINDS
    threads: int = 1
    l_from: int = 5
    l_to: int = 5

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.l_from > self.l_to:
            raise ValueError("l_from must not exceed l_to")
        object.__setattr__(self, "kinds", _search_order(self.kinds))


@dataclass(frozen=True)
class Unresolved:
    l: int
    k_max: int
    kinds: tuple
    note: str = ""

    passed = False


def resolve(l: int, cfg: SearchConfig = SearchConfig()) -> Union[CriterionReport, Unresolved]:
    """Cheapest criterion first: mod 6, then Sophie Germain, then the witness search."""
    validate_l(l)
    for quick in (check_mod6, check_sophie_germain):
        rep = quick(l)
        if rep.passed:
            return rep
    rep = search_witness(l, cfg.k_max, cfg.kinds)
    if rep is not None:
        return rep
    log.info("l=%d unresolved up to k=%d", l, cfg.k_max)
    return Unresolved(l, cfg.k_max, cfg.kinds, L7_NOTE if l == 7 else "")
