"""Rule engine deciding R-goodness of group and space expressions, with derivation traces.

Rules are tried in a fixed order (R1..R10); the first one that decides wins.
Unknown is a verdict, not an error: it records why no rule applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache

from .errors import ResourceLimitError, ValidationError
from .exprcalc import (
    ClassifyingSpace,
    DirectProduct,
    Finite,
    FreeGroup,
    FreeProduct,
    GroupExpr,
    HNN,
    Product,
    RealProjective,
    SpaceExpr,
    Sphere,
    Wedge,
    Z,
    finite_order,
    free_factors,
    free_retract_rank,
    generated_by_torsion,
    has_finite_sylow,
    has_p_torsion,
    p_quotient_nontrivial,
    to_text,
    torsion_primes,
)
from .groups import FiniteGroup, cyclic, is_p_group
from .homology import integral_homology, kunneth_integral, tor_pairing
from .numtheory import is_prime_power_of
from .rings import RingDescriptor, field


class Verdict(str, Enum):
    GOOD = "good"
    BAD = "bad"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TraceStep:
    rule: str
    citation: str
    at: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "citation": self.citation, "at": self.at}


@dataclass(frozen=True)
class Judgment:
    verdict: Verdict
    ring: RingDescriptor
    trace: tuple[TraceStep, ...]
    notes: tuple[str, ...] = dc_field(default=())

    @property
    def rule(self) -> str:
        return self.trace[0].rule if self.trace else ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "ring": self.ring.text(),
            "trace": [s.to_dict() for s in self.trace],
            "notes": list(self.notes),
        }


CITE = {
    "R1": "spaces with finite homotopy groups are good for every solid ring",
    "R2": "B(Z) is the circle, which is complete and good at every prime and over Z",
    "R3": "a retract onto F(n), n >= 2, contains the circle wedge circle, bad at every prime and over Z",
    "R3-retract": "a space with an R-bad retract is R-bad (wedge summands and product factors are retracts)",
    "R4": "B(C2*C2) is 2-good",
    "R5-torsion": "a free product with p-torsion in two or more factors is p-bad",
    "R5-circle": "the circle wedge BP is p-bad for a group P with p-torsion",
    "R5-sylow": "a group generated by finite-order elements with a finite Sylow p-subgroup is p-good",
    "R5-trivial": "trivial free factors do not change the group",
    "R6": "Kunneth over F_p: a product of p-good spaces is p-good",
    "R7": "Kunneth over Z with all Tor terms zero: a product of Z-good spaces is Z-good",
    "R8": "a trivial HNN extension with one stable letter is the direct product with Z",
    "R8-open": "goodness of a single nontrivial HNN extension is open",
    "R9-sphere": "spheres are good for every solid ring",
    "R9-rp2": "RP^k is 2-good for every k",
    "R9-rp-prime": "RP^2 is good at every prime",
    "R9-rp-bad": "RP^2 is bad over Z and whenever 2 is not inverted in the coefficients",
    "R9-rpinf": "RP^infinity is BC2",
    "R9-classifying": "B(G) is judged through its group",
    "R9-wedge": "a wedge of classifying spaces is B of the free product; a product is B of the direct product",
    "R10": "no rule applies",
    "FIB": "a space fibred over a base with finite p-group fundamental group is p-good iff the fibre is",
}


def _step(rule: str, at, citation: str | None = None) -> TraceStep:
    key = citation or rule
    return TraceStep(rule, CITE.get(key, key), at if isinstance(at, str) else to_text(at))


def _judge(verdict, ring, steps, notes=()) -> Judgment:
    return Judgment(verdict, ring, tuple(steps), tuple(dict.fromkeys(notes)))


def _unknown(e, ring, reason, notes=()) -> Judgment:
    return _judge(Verdict.UNKNOWN, ring, [TraceStep("R10", f"{CITE['R10']}: {reason}", to_text(e))], notes)


def _prime_or_z(ring: RingDescriptor) -> bool:
    return ring.is_field_p or ring.is_integers


def classify(e: GroupExpr | SpaceExpr, ring: RingDescriptor) -> Judgment:
    """Verdict of e over ring; group expressions stand for their classifying spaces."""
    if not isinstance(ring, RingDescriptor):
        raise ValidationError("ring must be a RingDescriptor")
    return _classify(e, ring)


@lru_cache(maxsize=4096)
def _classify(e, ring: RingDescriptor) -> Judgment:
    if isinstance(e, SpaceExpr):
        return _classify_space(e, ring)
    if isinstance(e, GroupExpr):
        return _classify_group(e, ring)
    raise ValidationError(f"not an expression: {e!r}")


def _bad_retract(e, ring, parts) -> Judgment | None:
    for part in parts:
        j = _classify(part, ring)
        if j.verdict is Verdict.BAD:
            return _judge(Verdict.BAD, ring, [_step("R3", e, "R3-retract"), *j.trace], j.notes)
    return None


def _classify_group(e: GroupExpr, ring: RingDescriptor) -> Judgment:
    # R1
    if finite_order(e) is not None:
        return _judge(Verdict.GOOD, ring, [_step("R1", e)])
    # R2
    if isinstance(e, Z) or (isinstance(e, FreeGroup) and e.n == 1):
        if _prime_or_z(ring):
            return _judge(Verdict.GOOD, ring, [_step("R2", e)])
        return _unknown(e, ring, f"the circle is only covered at primes and over Z, not {ring.text()}")
    # R3
    rank = free_retract_rank(e)
    if rank >= 2 and _prime_or_z(ring):
        return _judge(Verdict.BAD, ring, [_step("R3", e)])
    if isinstance(e, FreeProduct):
        parts = free_factors(e)
    elif isinstance(e, DirectProduct):
        parts = list(e.children)
    elif isinstance(e, HNN) and e.trivial_morphisms:
        parts = [e.base]
    else:
        parts = []
    bad = _bad_retract(e, ring, parts)
    if bad:
        return bad
    if rank >= 2:
        return _unknown(e, ring, f"retract onto F({rank}) decides only at primes and over Z")

    if isinstance(e, FreeProduct):
        return _free_product(e, ring)
    if isinstance(e, DirectProduct):
        return _direct_product(e, ring, list(e.children))
    if isinstance(e, HNN):
        if e.stable_letters == 1 and e.trivial_morphisms:
            j = _classify(DirectProduct((e.base, Z())), ring)
            return _judge(j.verdict, ring, [_step("R8", e), *j.trace], j.notes)
        if e.stable_letters == 1:
            return _judge(Verdict.UNKNOWN, ring, [_step("R8", e, "R8-open")])
        return _unknown(e, ring, "several stable letters without a free retract of rank >= 2")
    return _unknown(e, ring, "unrecognised group")


def _free_product(e: FreeProduct, ring: RingDescriptor) -> Judgment:
    factors = free_factors(e)
    if len(factors) == 1:
        j = _classify(factors[0], ring)
        return _judge(j.verdict, ring, [_step("R5", e, "R5-trivial"), *j.trace], j.notes)
    if not ring.is_field_p:
        return _unknown(e, ring, f"free products are undecided over {ring.text()} beyond the retract rule")
    p = ring.p
    # R4
    if p == 2 and len(factors) == 2 and all(finite_order(f) == 2 for f in factors):
        return _judge(Verdict.GOOD, ring, [_step("R4", e)])
    # R5
    torsion = [f for f in factors if has_p_torsion(f, p)]
    if len(torsion) >= 2:
        return _judge(Verdict.BAD, ring, [_step("R5", e, "R5-torsion")], _torsion_notes(torsion, p))
    circles = [f for f in factors if isinstance(f, (Z, FreeGroup))]
    if circles and torsion:
        notes = []
        t = torsion[0]
        order = finite_order(t)
        if order is None or not is_prime_power_of(order, p):
            notes.append(
                f"stated for a finite p-group P; {to_text(t)} has {p}-torsion but is not a finite {p}-group"
            )
        return _judge(Verdict.BAD, ring, [_step("R5", e, "R5-circle")], notes)
    if all(generated_by_torsion(f) and has_finite_sylow(f, p) for f in factors):
        return _judge(Verdict.GOOD, ring, [_step("R5", e, "R5-sylow")])
    notes = []
    if circles:
        notes.append(
            "the Sylow criterion needs generation by elements of finite order, which fails for the "
            f"factor {to_text(circles[0])}"
        )
    return _unknown(e, ring, f"free product outside the {p}-torsion and Sylow criteria", notes)


def _torsion_notes(torsion, p) -> list[str]:
    notes = []
    for f in torsion:
        if finite_order(f) is None:
            if not (generated_by_torsion(f) and has_finite_sylow(f, p)):
                notes.append(
                    f"stated result applied; {to_text(f)} is not visibly generated by finite-order "
                    "elements with a finite Sylow subgroup"
                )
        elif p_quotient_nontrivial(f, p) is False:
            notes.append(
                f"stated result applied; the {p}-quotient G/O^{p}(G) of {to_text(f)} is trivial, "
                "a hypothesis its supporting argument uses"
            )
    return notes


def _direct_product(e, ring: RingDescriptor, parts) -> Judgment:
    """R6/R7 once no part is Bad."""
    js = [_classify(c, ring) for c in parts]
    if any(j.verdict is not Verdict.GOOD for j in js):
        return _unknown(e, ring, "some product factor is not known to be good")
    steps = [t for j in js for t in j.trace]
    notes = [n for j in js for n in j.notes]
    if ring.is_field_p:
        return _judge(Verdict.GOOD, ring, [_step("R6", e), *steps], notes)
    if ring.is_integers:
        ok, note = _tor_vanishes(parts)
        if ok:
            return _judge(Verdict.GOOD, ring, [_step("R7", e), *steps], notes + [note])
        return _unknown(e, ring, note)
    return _unknown(e, ring, f"products are only decided over F_p and Z, not {ring.text()}")


def _primes_of(x) -> set[int] | None:
    if isinstance(x, GroupExpr):
        return torsion_primes(x)
    if isinstance(x, ClassifyingSpace):
        return torsion_primes(x.group)
    if isinstance(x, Sphere):
        return set()
    if isinstance(x, RealProjective):
        return {2}
    parts = [_primes_of(c) for c in x.children]
    return None if None in parts else set().union(*parts)


TOR_CHECK_DEGREE = 4


def _tor_vanishes(parts) -> tuple[bool, str]:
    primes = [_primes_of(x) for x in parts]
    if None in primes:
        return False, "torsion primes of a factor are not determined"
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            common = primes[i] & primes[j]
            if common:
                return False, f"factors share torsion prime(s) {sorted(common)}, so Tor need not vanish"
    # independent confirmation in low degrees through the homology module
    try:
        hs = [integral_homology(_as_space(x), TOR_CHECK_DEGREE) for x in parts]
    except (ValidationError, ResourceLimitError):
        return True, "Tor vanishes: integral torsion primes of the factors are disjoint"
    acc = hs[0]
    for h in hs[1:]:
        for a in acc[1:]:
            for b in h[1:]:
                if not tor_pairing(a, b).is_zero:
                    raise AssertionError("disjoint torsion primes but nonzero Tor")
        acc = kunneth_integral(acc, h)
    return True, (
        "Tor vanishes: integral torsion primes of the factors are disjoint "
        f"(confirmed by direct Tor computation through degree {TOR_CHECK_DEGREE})"
    )


def _as_space(x):
    return ClassifyingSpace(x) if isinstance(x, GroupExpr) else x


def as_group_expr(s: SpaceExpr) -> GroupExpr | None:
    """The group G with s equivalent to BG when visible from the syntax."""
    if isinstance(s, ClassifyingSpace):
        return s.group
    if isinstance(s, Sphere):
        return Z() if s.k == 1 else None
    if isinstance(s, RealProjective):
        if s.k is None:
            return Finite(cyclic(2))
        return Z() if s.k == 1 else None
    if isinstance(s, (Wedge, Product)):
        parts = [as_group_expr(c) for c in s.children]
        if None in parts:
            return None
        return FreeProduct(tuple(parts)) if isinstance(s, Wedge) else DirectProduct(tuple(parts))
    return None


def _classify_space(s: SpaceExpr, ring: RingDescriptor) -> Judgment:
    if isinstance(s, ClassifyingSpace):
        j = _classify(s.group, ring)
        return _judge(j.verdict, ring, [_step("R9", s, "R9-classifying"), *j.trace], j.notes)
    if isinstance(s, Sphere):
        return _judge(Verdict.GOOD, ring, [_step("R9", s, "R9-sphere")])
    if isinstance(s, RealProjective):
        return _real_projective(s, ring)
    g = as_group_expr(s)
    if g is not None:
        j = _classify(g, ring)
        return _judge(j.verdict, ring, [_step("R9", s, "R9-wedge"), *j.trace], j.notes)
    bad = _bad_retract(s, ring, list(s.children))
    if bad:
        return bad
    if isinstance(s, Product):
        return _direct_product(s, ring, list(s.children))
    return _unknown(s, ring, "wedge of spaces that are not all classifying spaces")


def _real_projective(s: RealProjective, ring: RingDescriptor) -> Judgment:
    if s.k is None:
        j = _classify(Finite(cyclic(2)), ring)
        return _judge(j.verdict, ring, [_step("R9", s, "R9-rpinf"), *j.trace])
    if s.k == 1:
        return _judge(Verdict.GOOD, ring, [_step("R9", s, "R9-sphere")], ["RP^1 is the circle"])
    if ring.is_field_p and ring.p == 2:
        return _judge(Verdict.GOOD, ring, [_step("R9", s, "R9-rp2")])
    if s.k != 2:
        return _unknown(s, ring, f"RP^{s.k} is only decided at p = 2")
    if ring.is_field_p:
        return _judge(Verdict.GOOD, ring, [_step("R9", s, "R9-rp-prime")])
    if ring.is_integers:
        return _judge(Verdict.BAD, ring, [_step("R9", s, "R9-rp-bad")])
    if ring.kind == "Zinv" and not ring.inverts(2):
        return _judge(
            Verdict.BAD,
            ring,
            [_step("R9", s, "R9-rp-bad")],
            [
                "the condition '2 in J' is read as '2 is not inverted', the reading under which "
                "RP^2 has 2-torsion homology over the coefficients"
            ],
        )
    return _unknown(s, ring, f"RP^2 over {ring.text()} is not covered")


def classify_profile(e: GroupExpr | SpaceExpr, primes) -> dict[int, Judgment]:
    primes = sorted(set(int(q) for q in primes))
    if not primes:
        raise ValidationError("profile needs at least one prime")
    return {q: classify(e, field(q)) for q in primes}


def classify_via_fibration(base: FiniteGroup, p: int, fibre: Judgment | Verdict) -> Judgment:
    """Verdict of a total space fibred over a space with fundamental group base, a finite p-group."""
    ring = field(p)
    if not is_p_group(base, p):
        raise ValidationError(f"base of order {base.order} is not a {p}-group")
    if isinstance(fibre, Judgment):
        if fibre.ring != ring:
            raise ValidationError(f"fibre judged over {fibre.ring.text()}, expected {ring.text()}")
        verdict, trace, notes = fibre.verdict, fibre.trace, fibre.notes
    else:
        verdict, trace, notes = Verdict(fibre), (), ()
    step = TraceStep("FIB", CITE["FIB"], f"base of order {base.order}")
    return Judgment(verdict, ring, (step, *trace), notes)
