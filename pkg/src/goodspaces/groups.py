"""Finite groups as Cayley tables.

Elements are the integers ``0 .. order-1``; ``names`` only affects display.
Groups compare by identity, subgroups by their element sets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .numtheory import p_part, require_prime

MAX_ORDER = 2197  # 13^3, the largest elementary abelian target in the nilpotency checks
EXHAUSTIVE_ASSOCIATIVITY = 256


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int
    names: tuple[str, ...]

    def __post_init__(self):
        _validate_table(self.table, self.identity)
        if len(self.names) != len(self.table):
            raise ValidationError("names must list one string per element")

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> "FiniteGroup":
        """Build a group from a raw table, locating the identity."""
        rows = tuple(tuple(int(x) for x in row) for row in table)
        n = len(rows)
        if n == 0:
            raise ValidationError("empty table")
        if n > MAX_ORDER:
            raise ResourceLimitError(f"group order {n} exceeds cap {MAX_ORDER}")
        ident = next((i for i in range(n) if len(rows[i]) == n and rows[i] == tuple(range(n))), None)
        if ident is None:
            raise ValidationError("table has no identity element")
        if names is None:
            names = [str(i) for i in range(n)]
        return cls(rows, ident, tuple(names))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        inv = [0] * self.order
        for a, row in enumerate(self.table):
            inv[a] = row.index(e)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out, base = self.identity, a
        while k:
            if k & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            k >>= 1
        return out

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for a in self.elements:
            k, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t, inv = self.table, self.inverses
        return t[t[inv[a]][inv[b]]][t[a][b]]

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        t = self.table
        return t[t[g][x]][self.inverses[g]]

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in range(a))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.elements))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def _validate_table(table, identity):
    n = len(table)
    if n == 0:
        raise ValidationError("empty table")
    if n > MAX_ORDER:
        raise ResourceLimitError(f"group order {n} exceeds cap {MAX_ORDER}")
    full = set(range(n))
    for row in table:
        if len(row) != n or set(row) != full:
            raise ValidationError("table is not a Latin square")
    for j in range(n):
        if {table[i][j] for i in range(n)} != full:
            raise ValidationError("table is not a Latin square")
    if not 0 <= identity < n or table[identity] != tuple(range(n)):
        raise ValidationError("identity row is not the identity permutation")
    if any(table[x][identity] != x for x in range(n)):
        raise ValidationError("identity column is not the identity permutation")
    # A Latin square with identity already gives two-sided inverses once associative.
    arr = np.asarray(table, dtype=np.int32)
    if n <= EXHAUSTIVE_ASSOCIATIVITY:
        witnesses = range(n)
    else:
        witnesses = _table_generators(table, identity)
    # Light's test: {a : (xa)y = x(ay) for all x, y} is a submagma, so checking generators suffices.
    for a in witnesses:
        if not np.array_equal(arr[arr[:, a], :], arr[:, arr[a, :]]):
            raise ValidationError("table is not associative")


def _table_generators(table, identity) -> list[int]:
    n = len(table)
    gens: list[int] = []
    have = {identity}
    for g in range(n):
        if g in have:
            continue
        gens.append(g)
        frontier = list(have)
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    y = table[x][h]
                    if y not in have:
                        have.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def issubset(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_whole(self) -> bool:
        return len(self.elements) == self.parent.order

    def is_closed(self) -> bool:
        G = self.parent
        m = self.members
        return G.identity in m and all(G.mul(a, b) in m for a in m for b in m)

    def is_normal(self, ambient: "Subgroup | None" = None) -> bool:
        """Normal in ``ambient`` (default: the whole parent group)."""
        G = self.parent
        conj = ambient.elements if ambient is not None else G.elements
        m = self.members
        return all(G.conjugate(g, x) in m for g in conj for x in m)

    def generators(self) -> list[int]:
        """A small generating set (greedy)."""
        G = self.parent
        gens: list[int] = []
        have = {G.identity}
        for x in self.elements:
            if x not in have:
                gens.append(x)
                have = set(generate(G, gens).elements)
        return gens

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group, elements renumbered in sorted order."""
        G = self.parent
        index = {x: i for i, x in enumerate(self.elements)}
        table = tuple(tuple(index[G.mul(a, b)] for b in self.elements) for a in self.elements)
        return FiniteGroup(table, index[G.identity], tuple(G.names[x] for x in self.elements))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.order})"


@dataclass(frozen=True)
class SeriesChain:
    """Descending subgroup chain.

    ``stabilized`` is True when the chain got stuck at a nontrivial term, in
    which case the last two terms are equal. A chain that reaches the trivial
    subgroup ends there and is not marked stabilized.
    """

    terms: tuple[Subgroup, ...]
    stabilized: bool

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    @property
    def reaches_trivial(self) -> bool:
        return self.terms[-1].is_trivial()

    @property
    def last(self) -> Subgroup:
        return self.terms[-1]


def _descend(first: Subgroup, step) -> SeriesChain:
    terms = [first]
    cur = first
    while not cur.is_trivial():
        nxt = step(cur)
        terms.append(nxt)
        if nxt == cur:
            return SeriesChain(tuple(terms), True)
        cur = nxt
    return SeriesChain(tuple(terms), False)


def generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Closure of ``gens`` under multiplication."""
    t = G.table
    have = {G.identity}
    used: list[int] = []
    for g in gens:
        if not 0 <= g < G.order:
            raise ValidationError(f"element index {g} out of range for order {G.order}")
        if g in have:
            continue
        used.append(g)
        frontier = list(have)
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for h in used:
                    y = row[h]
                    if y not in have:
                        have.add(y)
                        nxt.append(y)
            frontier = nxt
    return Subgroup(G, tuple(have))


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return generate(G, gens)


def normalizer(H: Subgroup) -> Subgroup:
    G = H.parent
    m = H.members
    return Subgroup(G, tuple(g for g in G.elements if all(G.conjugate(g, x) in m for x in H.elements)))


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """Some Sylow p-subgroup of G.

    Grows a p-subgroup P one factor of p at a time: while P is not Sylow,
    N(P)/P has an element of order p, and adjoining a representative gives
    a p-subgroup of order p|P|.
    """
    require_prime(p)
    target = p_part(G.order, p)
    P = G.trivial()
    while P.order < target:
        N = normalizer(P)
        for x in N.elements:
            if x not in P and G.power(x, p) in P:
                P = generate(G, P.generators() + [x])
                break
        else:  # pragma: no cover - excluded by Cauchy's theorem
            raise AssertionError("no p-element in N(P)/P")
    return P


def o_p_residual(G: FiniteGroup, p: int) -> tuple[Subgroup, FiniteGroup]:
    """(O^p(G), G/O^p(G)): the subgroup generated by p'-elements and its quotient."""
    require_prime(p)
    gens = [x for x in G.elements if math.gcd(G.element_order(x), p) == 1]
    N = generate(G, gens)
    return N, quotient_group(G, N)


def quotient_group(G: FiniteGroup, N: Subgroup) -> FiniteGroup:
    if N.parent is not G:
        raise ValidationError("subgroup belongs to a different group")
    if not N.is_normal():
        raise ValidationError("subgroup is not normal")
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for g in G.elements:
        if g in coset_of:
            continue
        k = len(reps)
        reps.append(g)
        for n in N.elements:
            coset_of[G.mul(g, n)] = k
    table = tuple(tuple(coset_of[G.mul(a, b)] for b in reps) for a in reps)
    return FiniteGroup(table, coset_of[G.identity], tuple(f"[{G.names[r]}]" for r in reps))


def lower_p_central_series(G: FiniteGroup, p: int) -> SeriesChain:
    """gamma_1 = G, gamma_{i+1} = <[G, gamma_i], gamma_i^p>."""
    require_prime(p)

    def step(H: Subgroup) -> Subgroup:
        gens = {G.commutator(g, h) for g in G.elements for h in H.elements}
        gens.update(G.power(h, p) for h in H.elements)
        return generate(G, sorted(gens))

    return _descend(G.whole(), step)


def is_generated_by_order_m(G: FiniteGroup, m: int) -> bool:
    if m < 1:
        raise ValidationError("m must be positive")
    return generate(G, [x for x in G.elements if G.element_order(x) == m]).is_whole()


def is_p_group(G: FiniteGroup, p: int) -> bool:
    return p_part(G.order, p) == G.order


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by repeatedly adjoining one element. Meant for small groups."""
    seen = {G.trivial().elements: G.trivial()}
    queue = [G.trivial()]
    while queue:
        H = queue.pop()
        gens = H.generators()
        for x in G.elements:
            if x in H:
                continue
            K = generate(G, gens + [x])
            if K.elements not in seen:
                seen[K.elements] = K
                queue.append(K)
    return sorted(seen.values(), key=lambda H: (H.order, H.elements))


# ---------------------------------------------------------------------------
# constructors


@dataclass(frozen=True)
class GroupDescriptor:
    """Recipe for a concrete group; ``text()`` is the DSL spelling."""

    kind: str
    params: tuple = field(default=())

    def text(self) -> str:
        k, a = self.kind, self.params
        if k in ("C", "D", "S", "SL2"):
            return f"{k}({a[0]})"
        if k == "E":
            return f"E({a[0]},{a[1]})"
        if k == "prod":
            return "prod(" + ",".join(d.text() for d in a) + ")"
        return f"explicit[{len(a)}]"

    @property
    def order(self) -> int:
        k, a = self.kind, self.params
        if k == "C":
            return a[0]
        if k == "D":
            return 2 * a[0]
        if k == "S":
            return math.factorial(a[0])
        if k == "E":
            return a[0] ** a[1]
        if k == "SL2":
            p = a[0]
            return p * (p * p - 1)
        if k == "prod":
            return math.prod(d.order for d in a)
        return len(a)


def cyclic(n: int) -> GroupDescriptor:
    if n < 1:
        raise ValidationError("cyclic(n) needs n >= 1")
    return GroupDescriptor("C", (n,))


def dihedral(n: int) -> GroupDescriptor:
    if n < 2:
        raise ValidationError("dihedral(n) needs n >= 2")
    return GroupDescriptor("D", (n,))


def symmetric(n: int) -> GroupDescriptor:
    if n < 1:
        raise ValidationError("symmetric(n) needs n >= 1")
    return GroupDescriptor("S", (n,))


def elementary_abelian(p: int, k: int) -> GroupDescriptor:
    require_prime(p)
    if k < 1:
        raise ValidationError("elementary_abelian(p, k) needs k >= 1")
    return GroupDescriptor("E", (p, k))


def sl2(p: int) -> GroupDescriptor:
    require_prime(p)
    return GroupDescriptor("SL2", (p,))


def direct_product(*specs: GroupDescriptor) -> GroupDescriptor:
    if len(specs) < 2:
        raise ValidationError("direct_product needs at least two factors")
    return GroupDescriptor("prod", tuple(specs))


def explicit(table: Sequence[Sequence[int]]) -> GroupDescriptor:
    return GroupDescriptor("explicit", tuple(tuple(int(x) for x in row) for row in table))


def build_group(spec: GroupDescriptor) -> FiniteGroup:
    """Materialize a descriptor. Results are cached per descriptor."""
    if spec.order > MAX_ORDER:
        raise ResourceLimitError(f"{spec.text()} has order {spec.order} > {MAX_ORDER}")
    if spec.kind == "SL2" and spec.params[0] > 7:
        raise ResourceLimitError("SL2(p) is supported for p <= 7")
    if spec.kind == "S" and spec.params[0] > 6:
        raise ResourceLimitError("S(n) is supported for n <= 6")
    return _build(spec)


@lru_cache(maxsize=256)
def _build(spec: GroupDescriptor) -> FiniteGroup:
    k, a = spec.kind, spec.params
    if k == "C":
        n = a[0]
        return FiniteGroup(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0, tuple(map(str, range(n))))
    if k == "D":
        n = a[0]
        # index i + n*s stands for r^i s^s; s r s^-1 = r^-1
        def mul(x, y):
            i, s = x % n, x // n
            j, t = y % n, y // n
            return ((i + (j if s == 0 else -j)) % n) + n * ((s + t) % 2)

        names = [f"r{i}" for i in range(n)] + [f"s{i}" for i in range(n)]
        return _from_mul(2 * n, mul, 0, names)
    if k == "S":
        perms = list(itertools.permutations(range(a[0])))
        return _from_elements(perms, lambda s, t: tuple(s[t[x]] for x in range(len(t))), _cycle_name)
    if k == "E":
        p, r = a
        vecs = [tuple((i // p**j) % p for j in range(r)) for i in range(p**r)]
        return _from_elements(vecs, lambda u, v: tuple((x + y) % p for x, y in zip(u, v)), lambda v: "(" + ",".join(map(str, v)) + ")")
    if k == "SL2":
        p = a[0]
        mats = [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]
        return _from_elements(mats, lambda x, y: _mat_mul(x, y, p), lambda m: f"[[{m[0]},{m[1]}],[{m[2]},{m[3]}]]")
    if k == "prod":
        factors = [build_group(d) for d in a]
        tuples = list(itertools.product(*(range(f.order) for f in factors)))
        return _from_elements(
            tuples,
            lambda u, v: tuple(f.mul(x, y) for f, x, y in zip(factors, u, v)),
            lambda u: "(" + ",".join(f.names[x] for f, x in zip(factors, u)) + ")",
        )
    if k == "explicit":
        return FiniteGroup.from_table(a)
    raise ValidationError(f"unknown group kind {k!r}")


def _mat_mul(x, y, p):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _from_mul(n, mul, identity, names) -> FiniteGroup:
    return FiniteGroup(tuple(tuple(mul(x, y) for y in range(n)) for x in range(n)), identity, tuple(names))


def _from_elements(elems, mul, name) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elems)}
    table = tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)
    ident = next(i for i, row in enumerate(table) if row == tuple(range(len(elems))))
    return FiniteGroup(table, ident, tuple(name(e) for e in elems))


def _cycle_name(perm) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def element_by_name(G: FiniteGroup, name: str) -> int:
    try:
        return G.names.index(name)
    except ValueError:
        raise ValidationError(f"no element named {name!r}") from None


