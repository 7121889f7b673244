"""Group and space expressions: ASTs, the text DSL, Euler characteristics, Kurosh ranks.

DSL grammar::

    group := "Z" | "F(" n ")" | "C(" n ")" | "D(" n ")" | "S(" n ")" | "E(" p "," k ")"
           | "SL2(" p ")" | "free(" group ("," group)+ ")" | "prod(" group ("," group)+ ")"
           | "hnn(" group "," n "," ("trivial" | "nontrivial") ")"
    space := "B(" group ")" | "Sph(" n ")" | "RP(" (n | "inf") ")"
           | "wedge(" space ("," space)+ ")" | "prodsp(" space ("," space)+ ")"

Whitespace is ignored; the printer emits none.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import ResourceLimitError, ValidationError
from .groups import (
    FiniteGroup,
    GroupDescriptor,
    build_group,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    o_p_residual,
    sl2,
    symmetric,
)
from .numtheory import is_prime_power_of, prime_divisors, require_prime


class GroupExpr:
    def __str__(self):
        return to_text(self)


class SpaceExpr:
    def __str__(self):
        return to_text(self)


def _need_children(name, children, kind):
    if len(children) < 2:
        raise ValidationError(f"{name} needs at least two arguments")
    if not all(isinstance(c, kind) for c in children):
        raise ValidationError(f"{name} arguments must be {kind.__name__}")


@dataclass(frozen=True)
class Finite(GroupExpr):
    desc: GroupDescriptor

    @property
    def order(self) -> int:
        return self.desc.order

    def group(self) -> FiniteGroup:
        return build_group(self.desc)


@dataclass(frozen=True)
class Z(GroupExpr):
    pass


@dataclass(frozen=True)
class FreeGroup(GroupExpr):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("F(n) needs n >= 1")


@dataclass(frozen=True)
class FreeProduct(GroupExpr):
    children: tuple[GroupExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        _need_children("free", self.children, GroupExpr)


@dataclass(frozen=True)
class DirectProduct(GroupExpr):
    children: tuple[GroupExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        _need_children("prod", self.children, GroupExpr)


@dataclass(frozen=True)
class HNN(GroupExpr):
    """HNN extension recording only what the rules consume."""

    base: GroupExpr
    stable_letters: int
    trivial_morphisms: bool

    def __post_init__(self):
        if self.stable_letters < 1:
            raise ValidationError("hnn needs at least one stable letter")


@dataclass(frozen=True)
class ClassifyingSpace(SpaceExpr):
    group: GroupExpr


@dataclass(frozen=True)
class Sphere(SpaceExpr):
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("Sph(k) needs k >= 1")


@dataclass(frozen=True)
class RealProjective(SpaceExpr):
    k: int | None  # None is RP^infinity

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise ValidationError("RP(k) needs k >= 1")


@dataclass(frozen=True)
class Wedge(SpaceExpr):
    children: tuple[SpaceExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        _need_children("wedge", self.children, SpaceExpr)


@dataclass(frozen=True)
class Product(SpaceExpr):
    children: tuple[SpaceExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        _need_children("prodsp", self.children, SpaceExpr)


Expr = GroupExpr | SpaceExpr


def to_text(e: Expr) -> str:
    if isinstance(e, Finite):
        return e.desc.text()
    if isinstance(e, Z):
        return "Z"
    if isinstance(e, FreeGroup):
        return f"F({e.n})"
    if isinstance(e, FreeProduct):
        return "free(" + ",".join(map(to_text, e.children)) + ")"
    if isinstance(e, DirectProduct):
        return "prod(" + ",".join(map(to_text, e.children)) + ")"
    if isinstance(e, HNN):
        kind = "trivial" if e.trivial_morphisms else "nontrivial"
        return f"hnn({to_text(e.base)},{e.stable_letters},{kind})"
    if isinstance(e, ClassifyingSpace):
        return f"B({to_text(e.group)})"
    if isinstance(e, Sphere):
        return f"Sph({e.k})"
    if isinstance(e, RealProjective):
        return f"RP({'inf' if e.k is None else e.k})"
    if isinstance(e, Wedge):
        return "wedge(" + ",".join(map(to_text, e.children)) + ")"
    if isinstance(e, Product):
        return "prodsp(" + ",".join(map(to_text, e.children)) + ")"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# parser


class ParseError(ValidationError):
    def __init__(self, message: str, position: int, text: str):
        where = "end of input" if position >= len(text) else f"position {position}"
        super().__init__(f"{message} at {where}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|([(),]))")
_SPACE_HEADS = {"B", "Sph", "RP", "wedge", "prodsp"}
_GROUP_HEADS = {"Z", "F", "C", "D", "S", "E", "SL2", "free", "prod", "hnn"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                rest = text[pos:]
                if rest.strip():
                    bad = pos + len(rest) - len(rest.lstrip())
                    raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
                break
            kind = "num" if m.group(1) else "name" if m.group(2) else "sym"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] == "eof":
            want = value or kind or "token"
            raise ParseError(f"expected {want!r}", len(self.text), self.text)
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1]!r}", tok[2], self.text)
        self.i += 1
        return tok

    def nat(self) -> int:
        return int(self.take("num")[1])

    def finish(self):
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], self.text)

    def args(self, item):
        self.take("sym", "(")
        out = [item()]
        while self.peek()[1] == ",":
            self.take("sym", ",")
            out.append(item())
        self.take("sym", ")")
        return out

    def _guard(self, pos, build):
        try:
            return build()
        except ParseError:
            raise
        except ValidationError as exc:
            raise ParseError(str(exc), pos, self.text) from None

    def group(self) -> GroupExpr:
        kind, name, pos = self.take("name")
        if name == "Z":
            return Z()
        if name not in _GROUP_HEADS:
            raise ParseError(f"unknown group constructor {name!r}", pos, self.text)
        if name in ("free", "prod"):
            children = self.args(self.group)
            cls = FreeProduct if name == "free" else DirectProduct
            return self._guard(pos, lambda: cls(tuple(children)))
        if name == "hnn":
            self.take("sym", "(")
            base = self.group()
            self.take("sym", ",")
            n = self.nat()
            self.take("sym", ",")
            flag = self.take("name")
            if flag[1] not in ("trivial", "nontrivial"):
                raise ParseError("expected 'trivial' or 'nontrivial'", flag[2], self.text)
            self.take("sym", ")")
            return self._guard(pos, lambda: HNN(base, n, flag[1] == "trivial"))
        nums = self.args(self.nat)
        arity = 2 if name == "E" else 1
        if len(nums) != arity:
            raise ParseError(f"{name} takes {arity} argument(s)", pos, self.text)
        makers = {
            "F": lambda: FreeGroup(nums[0]),
            "C": lambda: Finite(cyclic(nums[0])),
            "D": lambda: Finite(dihedral(nums[0])),
            "S": lambda: Finite(symmetric(nums[0])),
            "E": lambda: Finite(elementary_abelian(nums[0], nums[1])),
            "SL2": lambda: Finite(sl2(nums[0])),
        }
        return self._guard(pos, makers[name])

    def space(self) -> SpaceExpr:
        kind, name, pos = self.take("name")
        if name == "B":
            self.take("sym", "(")
            g = self.group()
            self.take("sym", ")")
            return ClassifyingSpace(g)
        if name == "Sph":
            nums = self.args(self.nat)
            if len(nums) != 1:
                raise ParseError("Sph takes 1 argument", pos, self.text)
            return self._guard(pos, lambda: Sphere(nums[0]))
        if name == "RP":
            self.take("sym", "(")
            tok = self.peek()
            if tok[0] == "name" and tok[1] == "inf":
                self.take()
                k = None
            else:
                k = self.nat()
            self.take("sym", ")")
            return self._guard(pos, lambda: RealProjective(k))
        if name in ("wedge", "prodsp"):
            children = self.args(self.space)
            cls = Wedge if name == "wedge" else Product
            return self._guard(pos, lambda: cls(tuple(children)))
        raise ParseError(f"unknown space constructor {name!r}", pos, self.text)


def parse_group_expr(text: str) -> GroupExpr:
    p = _Parser(text)
    e = p.group()
    p.finish()
    return e


def parse_space_expr(text: str) -> SpaceExpr:
    p = _Parser(text)
    e = p.space()
    p.finish()
    return e


def parse_expr(text: str) -> Expr:
    """Group or space expression, decided by the outermost constructor."""
    p = _Parser(text)
    head = p.peek()
    e = p.space() if head[0] == "name" and head[1] in _SPACE_HEADS else p.group()
    p.finish()
    return e


# ---------------------------------------------------------------------------
# structural invariants


def finite_order(e: GroupExpr) -> int | None:
    """Order of the underlying group when it is finite, else None."""
    if isinstance(e, Finite):
        return e.order
    if isinstance(e, DirectProduct):
        orders = [finite_order(c) for c in e.children]
        return None if None in orders else math.prod(orders)
    if isinstance(e, FreeProduct):
        orders = [finite_order(c) for c in e.children]
        if None in orders:
            return None
        big = [o for o in orders if o != 1]
        return big[0] if len(big) == 1 else (1 if not big else None)
    return None


def free_factors(e: GroupExpr) -> list[GroupExpr]:
    """Factors of a (nested) free product, with trivial factors dropped."""
    if isinstance(e, FreeProduct):
        return [f for c in e.children for f in free_factors(c)]
    return [] if finite_order(e) == 1 else [e]


def euler_characteristic(e: GroupExpr) -> Fraction:
    if isinstance(e, Finite):
        return Fraction(1, e.order)
    if isinstance(e, Z):
        return Fraction(0)
    if isinstance(e, FreeGroup):
        return Fraction(1 - e.n)
    if isinstance(e, FreeProduct):
        return sum((euler_characteristic(c) for c in e.children), Fraction(0)) - (len(e.children) - 1)
    if isinstance(e, DirectProduct):
        return reduce(lambda a, b: a * b, (euler_characteristic(c) for c in e.children), Fraction(1))
    if isinstance(e, HNN):
        return euler_characteristic(e.base) - e.stable_letters
    raise TypeError(f"not a group expression: {e!r}")


def is_torsion_free_free(e: GroupExpr) -> bool:
    return isinstance(e, (Z, FreeGroup))


def kurosh_kernel_rank(e: GroupExpr, p: int) -> int:
    """Rank of the free kernel of a free product of Z's and finite p-groups onto the product of its finite factors.

    The kernel K has index Q = product of the finite factor orders and
    meets no conjugate of a finite factor, so it is free with
    1 - rank(K) = chi(K) = Q * chi(e).
    """
    require_prime(p)
    if not isinstance(e, FreeProduct):
        raise ValidationError("kernel rank needs a free product")
    Q = 1
    for f in free_factors(e):
        if is_torsion_free_free(f):
            continue
        order = finite_order(f)
        if order is None or not is_prime_power_of(order, p):
            raise ValidationError(f"inadmissible factor {to_text(f)}: neither Z nor a finite {p}-group")
        Q *= order
    rank = 1 - Q * euler_characteristic(e)
    if rank.denominator != 1 or rank < 0:
        raise ValidationError(f"kernel rank {rank} is not a nonnegative integer")
    return int(rank)


def has_p_torsion(e: GroupExpr, p: int) -> bool:
    if isinstance(e, Finite):
        return e.order % p == 0
    if isinstance(e, (Z, FreeGroup)):
        return False
    if isinstance(e, (FreeProduct, DirectProduct)):
        return any(has_p_torsion(c, p) for c in e.children)
    if isinstance(e, HNN):
        return has_p_torsion(e.base, p)
    raise TypeError(f"not a group expression: {e!r}")


def finite_group_of(e: GroupExpr) -> FiniteGroup | None:
    """Cayley-table model of a finite expression, or None if infinite or too large."""
    if finite_order(e) is None:
        return None
    desc = _descriptor(e)
    try:
        return build_group(desc)
    except ResourceLimitError:
        return None


def descriptor_of(e: GroupExpr) -> GroupDescriptor:
    """Constructor descriptor of a finite expression."""
    return _descriptor(e)


def _descriptor(e: GroupExpr) -> GroupDescriptor:
    if isinstance(e, Finite):
        return e.desc
    if isinstance(e, DirectProduct):
        return direct_product(*(_descriptor(c) for c in e.children))
    if isinstance(e, FreeProduct):
        big = free_factors(e)
        return _descriptor(big[0]) if big else cyclic(1)
    raise ValidationError(f"{to_text(e)} is not finite")


def p_quotient_nontrivial(e: GroupExpr, p: int) -> bool | None:
    """Whether G / O^p(G) is nontrivial; None unless e is finite and small enough to tabulate."""
    G = finite_group_of(e)
    if G is None:
        return None
    return o_p_residual(G, p)[1].order > 1


def generated_by_torsion(e: GroupExpr) -> bool:
    """Sufficient test that the group is generated by elements of finite order."""
    if isinstance(e, Finite):
        return True
    if isinstance(e, (FreeProduct, DirectProduct)):
        return all(generated_by_torsion(c) for c in e.children)
    return False  # Z, F(n), and HNN extensions surject onto Z


def has_finite_sylow(e: GroupExpr, p: int) -> bool:
    """Sufficient test for a finite Sylow p-subgroup (every finite p-subgroup subconjugate to it)."""
    if isinstance(e, (Finite, Z, FreeGroup)):
        return True
    if isinstance(e, FreeProduct):
        # finite subgroups of a free product are conjugate into a factor
        torsion = [c for c in free_factors(e) if has_p_torsion(c, p)]
        return len(torsion) <= 1 and all(has_finite_sylow(c, p) for c in free_factors(e))
    if isinstance(e, DirectProduct):
        return all(has_finite_sylow(c, p) for c in e.children)
    if isinstance(e, HNN):
        return e.trivial_morphisms and has_finite_sylow(e.base, p)
    return False


def free_retract_rank(e: GroupExpr) -> int:
    """Largest n for which the expression visibly retracts onto a free group F(n)."""
    if isinstance(e, Z):
        return 1
    if isinstance(e, FreeGroup):
        return e.n
    if isinstance(e, Finite):
        return 0
    if isinstance(e, FreeProduct):
        return sum(free_retract_rank(c) for c in e.children)
    if isinstance(e, DirectProduct):
        return max(free_retract_rank(c) for c in e.children)
    if isinstance(e, HNN):
        # killing the base leaves F(stable letters); trivial morphisms also split off the base
        own = e.stable_letters
        return max(own, free_retract_rank(e.base)) if e.trivial_morphisms else own
    raise TypeError(f"not a group expression: {e!r}")


def torsion_primes(e: GroupExpr) -> set[int] | None:
    """Primes that can occur as torsion in integral homology; None if not determined."""
    if isinstance(e, Finite):
        return set(prime_divisors(e.order))
    if isinstance(e, (Z, FreeGroup)):
        return set()
    if isinstance(e, (FreeProduct, DirectProduct)):
        parts = [torsion_primes(c) for c in e.children]
        return None if None in parts else set().union(*parts)
    if isinstance(e, HNN):
        return torsion_primes(e.base) if e.trivial_morphisms else None
    return None


@dataclass(frozen=True)
class FactorContent:
    factor: str
    has_p_torsion: bool
    is_infinite_torsion_free: bool
    p_quotient_nontrivial: bool | None


@dataclass(frozen=True)
class PContent:
    p: int
    factors: tuple[FactorContent, ...]
    p_torsion_count: int
    sylow_finite: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "factors": [vars(f) for f in self.factors],
            "p_torsion_count": self.p_torsion_count,
            "sylow_finite": self.sylow_finite,
        }


def p_content(e: GroupExpr, p: int) -> PContent:
    require_prime(p)
    factors = free_factors(e) if isinstance(e, FreeProduct) else [e]
    rows = tuple(
        FactorContent(to_text(f), has_p_torsion(f, p), is_torsion_free_free(f), p_quotient_nontrivial(f, p))
        for f in factors
    )
    count = sum(r.has_p_torsion for r in rows)
    sylow = count <= 1 and all(has_finite_sylow(f, p) for f in factors)
    return PContent(p, rows, count, sylow)
