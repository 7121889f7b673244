"""Homology of named spaces over F_p and Z, with Tor, Kunneth, and a bar-complex oracle."""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

from .errors import ResourceLimitError, ValidationError
from .exprcalc import (
    DirectProduct,
    Finite,
    FreeGroup,
    FreeProduct,
    Product,
    RealProjective,
    Sphere,
    SpaceExpr,
    Wedge,
    Z,
    ClassifyingSpace,
    GroupExpr,
    to_text,
)
from .groups import FiniteGroup, GroupDescriptor, build_group
from .numtheory import factorize
from .rings import RingDescriptor

ORACLE_MAX_ORDER = 12
ORACLE_MAX_DEGREE = 4


@dataclass(frozen=True)
class FGAbelian:
    """Z^free_rank plus cyclic summands Z/d_1 + ... with d_1 | d_2 | ..."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValidationError("free rank must be nonnegative")
        object.__setattr__(self, "torsion", invariant_factors(self.torsion))

    @classmethod
    def cyclic(cls, n: int) -> "FGAbelian":
        """Z/n, with n = 0 meaning Z."""
        return cls(1) if n == 0 else cls(0, (n,))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def summands(self) -> list[int]:
        """Cyclic orders of a decomposition, 0 standing for Z."""
        return [0] * self.free_rank + list(self.torsion)

    def __add__(self, other: "FGAbelian") -> "FGAbelian":
        return FGAbelian(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def tensor(self, other: "FGAbelian") -> "FGAbelian":
        return _bilinear(self, other, lambda m, n: math.gcd(m, n))

    def tor(self, other: "FGAbelian") -> "FGAbelian":
        return tor_pairing(self, other)

    def dim_mod(self, p: int) -> int:
        """dim over F_p of A tensor F_p."""
        return self.free_rank + sum(1 for d in self.torsion if d % p == 0)

    def text(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.text()


def invariant_factors(orders) -> tuple[int, ...]:
    """Canonical divisibility chain for a direct sum of finite cyclic groups (orders 1 dropped)."""
    by_prime: dict[int, list[int]] = defaultdict(list)
    for n in orders:
        n = int(n)
        if n < 1:
            raise ValidationError(f"torsion orders must be positive, got {n}")
        for q, e in factorize(n).items():
            by_prime[q].append(q**e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        for i, pw in enumerate(sorted(powers, reverse=True)):
            chain[length - 1 - i] *= pw
    return tuple(chain)


def _bilinear(a: FGAbelian, b: FGAbelian, pair) -> FGAbelian:
    """Sum over summand pairs; pair(m, n) gives the cyclic order, 0 = Z, 1 = zero."""
    out = FGAbelian()
    for m in a.summands():
        for n in b.summands():
            out = out + FGAbelian.cyclic(pair(m, n))
    return out


def _tor_cyclic(m: int, n: int) -> int:
    if m == 0 or n == 0:
        return 1
    return math.gcd(m, n)


def tor_pairing(a: FGAbelian, b: FGAbelian) -> FGAbelian:
    """Tor_1^Z(A, B)."""
    return _bilinear(a, b, _tor_cyclic)


ZERO = FGAbelian()
INTEGERS = FGAbelian(1)


@dataclass(frozen=True)
class GradedModule:
    """H_0..H_max_degree; over F_p each entry is F_p^d stored as (Z/p)^d."""

    ring: RingDescriptor
    entries: tuple[FGAbelian, ...]

    @property
    def max_degree(self) -> int:
        return len(self.entries) - 1

    def dims(self) -> list[int]:
        if not self.ring.is_field_p:
            raise ValidationError("dimensions are only defined over a prime field")
        return [e.dim_mod(self.ring.p) for e in self.entries]

    def truncate(self, n: int) -> "GradedModule":
        return GradedModule(self.ring, self.entries[: n + 1])

    def to_dict(self) -> dict:
        if self.ring.is_field_p:
            degrees = [{"degree": i, "dim": d} for i, d in enumerate(self.dims())]
        else:
            degrees = [
                {"degree": i, "free_rank": e.free_rank, "torsion": list(e.torsion)}
                for i, e in enumerate(self.entries)
            ]
        return {"ring": self.ring.text(), "degrees": degrees}

    def text(self) -> str:
        if self.ring.is_field_p:
            return "[" + ", ".join(map(str, self.dims())) + "]"
        return "[" + ", ".join(e.text() for e in self.entries) + "]"


# ---------------------------------------------------------------------------
# integral closed forms


def _sphere(k: int, n: int) -> list[FGAbelian]:
    return [INTEGERS if i == 0 or i == k else ZERO for i in range(n + 1)]


def _real_projective(k: int | None, n: int) -> list[FGAbelian]:
    out = [INTEGERS]
    for i in range(1, n + 1):
        if k is not None and i > k:
            out.append(ZERO)
        elif k is not None and i == k:
            out.append(INTEGERS if k % 2 else ZERO)
        else:
            out.append(FGAbelian(0, (2,)) if i % 2 else ZERO)
    return out


def _cyclic_group(m: int, n: int) -> list[FGAbelian]:
    if m == 1:
        return [INTEGERS] + [ZERO] * n
    return [INTEGERS] + [FGAbelian(0, (m,)) if i % 2 else ZERO for i in range(1, n + 1)]


def _wedge(parts: list[list[FGAbelian]]) -> list[FGAbelian]:
    n = len(parts[0]) - 1
    out = [INTEGERS]
    for i in range(1, n + 1):
        acc = ZERO
        for h in parts:
            acc = acc + h[i]
        out.append(acc)
    return out


def kunneth_integral(a: list[FGAbelian], b: list[FGAbelian]) -> list[FGAbelian]:
    n = min(len(a), len(b)) - 1
    out = []
    for k in range(n + 1):
        acc = ZERO
        for i in range(k + 1):
            acc = acc + a[i].tensor(b[k - i])
        for i in range(k):
            acc = acc + tor_pairing(a[i], b[k - 1 - i])
        out.append(acc)
    return out


def _product(parts: list[list[FGAbelian]]) -> list[FGAbelian]:
    out = parts[0]
    for h in parts[1:]:
        out = kunneth_integral(out, h)
    return out


def has_closed_form(desc: GroupDescriptor) -> bool:
    """Whether B(G) homology comes from formulas rather than the bar oracle."""
    if desc.kind in ("C", "E") or (desc.kind == "D" and desc.params[0] == 2):
        return True
    if desc.kind == "prod":
        return all(has_closed_form(d) for d in desc.params)
    return build_group(desc).is_abelian()


def _descriptor_homology(desc: GroupDescriptor, n: int) -> list[FGAbelian]:
    if desc.kind == "C":
        return _cyclic_group(desc.params[0], n)
    if desc.kind == "E":
        p, k = desc.params
        return _product([_cyclic_group(p, n)] * k) if k else _cyclic_group(1, n)
    if desc.kind == "prod":
        return _product([_descriptor_homology(d, n) for d in desc.params])
    if desc.kind == "D" and desc.params[0] == 2:
        return _product([_cyclic_group(2, n)] * 2)
    G = build_group(desc)
    if G.is_abelian():
        return _abelian_homology(G, n)
    # nonabelian groups have no closed form here; small ones go to the bar complex
    return list(bar_homology_oracle(G, None, n).entries)


def _abelian_homology(G: FiniteGroup, n: int) -> list[FGAbelian]:
    """Finite abelian G is the product of cyclic groups of its invariant factors."""
    factors = _abelian_invariants(G)
    if not factors:
        return _cyclic_group(1, n)
    return _product([_cyclic_group(m, n) for m in factors])


def _abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    # number of elements of order dividing q^j determines the q-primary part
    orders = G.element_orders()
    parts = []
    for q, e in factorize(G.order).items():
        counts = [sum(1 for o in orders if (q**j) % o == 0) for j in range(e + 1)]
        # counts[j] = prod over cyclic q-summands q^min(j, a_i); recover the a_i
        logs = [round(math.log(c, q)) for c in counts]
        # number of summands with exponent >= j is logs[j] - logs[j-1]
        ge = [logs[j] - logs[j - 1] for j in range(1, e + 1)] + [0]
        for j in range(1, e + 1):
            parts += [q**j] * (ge[j - 1] - ge[j])
    return invariant_factors(parts)


def group_homology_integral(g: GroupExpr, n: int) -> list[FGAbelian]:
    if isinstance(g, Finite):
        return _descriptor_homology(g.desc, n)
    if isinstance(g, Z):
        return _sphere(1, n)
    if isinstance(g, FreeGroup):
        return _wedge([_sphere(1, n)] * g.n)
    if isinstance(g, DirectProduct):
        return _product([group_homology_integral(c, n) for c in g.children])
    if isinstance(g, FreeProduct):
        # B(G*H) is BG wedge BH
        return _wedge([group_homology_integral(c, n) for c in g.children])
    raise ValidationError(f"no closed form for B({to_text(g)})")


def integral_homology(s: SpaceExpr, n: int) -> list[FGAbelian]:
    if isinstance(s, Sphere):
        return _sphere(s.k, n)
    if isinstance(s, RealProjective):
        return _real_projective(s.k, n)
    if isinstance(s, ClassifyingSpace):
        return group_homology_integral(s.group, n)
    if isinstance(s, Wedge):
        return _wedge([integral_homology(c, n) for c in s.children])
    if isinstance(s, Product):
        return _product([integral_homology(c, n) for c in s.children])
    raise ValidationError(f"unsupported space {s!r}")


def universal_coefficients(h: list[FGAbelian], p: int) -> list[FGAbelian]:
    """H_n(X; F_p) = H_n tensor F_p + Tor(H_{n-1}, F_p)."""
    fp = FGAbelian(0, (p,))
    out = []
    for i, a in enumerate(h):
        d = a.dim_mod(p) + (tor_pairing(h[i - 1], fp).dim_mod(p) if i else 0)
        out.append(FGAbelian(0, (p,) * d))
    return out


def _check_ring(ring: RingDescriptor):
    if not (ring.is_field_p or ring.is_integers):
        raise ValidationError(f"homology is computed over F_p or Z only, not {ring.text()}")


def space_homology(s: SpaceExpr | GroupExpr, ring: RingDescriptor, max_degree: int) -> GradedModule:
    """Homology of a space (a group expression stands for its classifying space)."""
    _check_ring(ring)
    if max_degree < 0:
        raise ValidationError("max_degree must be nonnegative")
    if isinstance(s, GroupExpr):
        s = ClassifyingSpace(s)
    h = integral_homology(s, max_degree)
    if ring.is_field_p:
        h = universal_coefficients(h, ring.p)
    return GradedModule(ring, tuple(h))


# ---------------------------------------------------------------------------
# bar complex oracle


def _bar_cells(G: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    nonid = [g for g in G.elements if g != G.identity]
    return list(itertools.product(nonid, repeat=n))


def _bar_boundary(G: FiniteGroup, n: int, index: dict) -> list[dict[int, int]]:
    """Rows of d_n: one sparse row per n-cell, in the normalized complex with trivial coefficients."""
    rows = []
    e = G.identity
    for cell in _bar_cells(G, n):
        row: dict[int, int] = defaultdict(int)
        faces = [(1, cell[1:])]
        for i in range(n - 1):
            prod = G.mul(cell[i], cell[i + 1])
            faces.append(((-1) ** (i + 1), cell[:i] + (prod,) + cell[i + 2 :]))
        faces.append(((-1) ** n, cell[:-1]))
        for sign, face in faces:
            if e in face:
                continue
            row[index[face]] += sign
        rows.append({c: v for c, v in row.items() if v})
    return rows


def _eliminate(rows: list[dict[int, int]], modulus: int | None) -> tuple[int, list[int]]:
    """Rank and nonunit invariant factors of a sparse integer matrix (over Z, or rank mod p)."""
    if modulus:
        rows = [{c: v % modulus for c, v in r.items() if v % modulus} for r in rows]
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = defaultdict(set)
    live = dict(enumerate(rows))
    for i, r in live.items():
        for c in r:
            col_rows[c].add(i)
    rank = 0

    def is_unit(v):
        return v % modulus != 0 if modulus else abs(v) == 1

    def pivot_of(r):
        units = [c for c, v in r.items() if is_unit(v)]
        return min(units, key=lambda c: len(col_rows[c])) if units else None

    def pivots():
        # sweep short rows first; rows changed by elimination are revisited next sweep
        progress = True
        while progress:
            progress = False
            for i in sorted(live, key=lambda k: len(live[k])):
                if i in live:
                    c = pivot_of(live[i])
                    if c is not None:
                        progress = True
                        yield i, c

    for i, c in pivots():
        prow = live.pop(i)
        for cc in prow:
            col_rows[cc].discard(i)
        pv = prow[c]
        inv = pow(pv, -1, modulus) if modulus else pv
        for j in list(col_rows[c]):
            r = live[j]
            f = r[c] * inv
            for cc, v in prow.items():
                nv = r.get(cc, 0) - f * v
                if modulus:
                    nv %= modulus
                if nv:
                    if cc not in r:
                        col_rows[cc].add(j)
                    r[cc] = nv
                elif cc in r:
                    del r[cc]
                    col_rows[cc].discard(j)
            if not r:
                del live[j]
        rank += 1
    if not live:
        return rank, []
    if modulus:  # every nonzero entry mod p is a unit, so nothing remains
        raise AssertionError("unreachable")
    cols = sorted({c for r in live.values() for c in r})
    pos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in live]
    for k, r in enumerate(live.values()):
        for c, v in r.items():
            dense[k][pos[c]] = v
    diag = smith_diagonal(dense)
    return rank + len(diag), [d for d in diag if d != 1]


def smith_diagonal(a: list[list[int]]) -> list[int]:
    """Nonzero Smith normal form diagonal of an integer matrix."""
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if not done:
                continue
            # divisibility: fold a non-divisible entry into the pivot row
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@lru_cache(maxsize=64)
def _bar_ranks(G: FiniteGroup, modulus: int | None, n: int) -> tuple[int, tuple[int, ...]]:
    index = {cell: k for k, cell in enumerate(_bar_cells(G, n - 1))}
    rank, torsion = _eliminate(_bar_boundary(G, n, index), modulus)
    return rank, tuple(torsion)


def bar_homology_oracle(G: FiniteGroup, ring: RingDescriptor | None, max_degree: int) -> GradedModule:
    """Homology of G from the normalized bar complex by exact elimination; ring None means Z."""
    from .rings import integers

    ring = ring or integers()
    _check_ring(ring)
    if G.order > ORACLE_MAX_ORDER or max_degree > ORACLE_MAX_DEGREE:
        raise ResourceLimitError(
            f"bar oracle limited to |G| <= {ORACLE_MAX_ORDER} and degree <= {ORACLE_MAX_DEGREE}"
        )
    modulus = ring.p if ring.is_field_p else None
    ranks = {0: (0, ())}  # d_0 = 0; d_1 = 0 in the normalized complex too
    for k in range(1, max_degree + 2):
        ranks[k] = _bar_ranks(G, modulus, k) if G.order > 1 else (0, ())
    entries = []
    for k in range(max_degree + 1):
        cells = (G.order - 1) ** k
        free = cells - ranks[k][0] - ranks[k + 1][0]
        if modulus:
            entries.append(FGAbelian(0, (modulus,) * free))
        else:
            entries.append(FGAbelian(free, ranks[k + 1][1]))
    return GradedModule(ring, tuple(entries))


# ---------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class HomologyComparison:
    equal: bool
    left: GradedModule
    right: GradedModule
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "notes": list(self.notes),
        }


def homology_comparison(
    a: SpaceExpr, b: SpaceExpr, ring: RingDescriptor, max_degree: int, probe_primes=(2, 3, 5, 7)
) -> HomologyComparison:
    """Compare two spaces over ring; notes record primes where the answer differs from ring's."""
    from .rings import field

    left = space_homology(a, ring, max_degree)
    right = space_homology(b, ring, max_degree)
    equal = left.entries == right.entries
    notes = []
    for q in probe_primes:
        f = field(q)
        if f == ring:
            continue
        same = space_homology(a, f, max_degree).entries == space_homology(b, f, max_degree).entries
        if same != equal:
            verb = "agree" if same else "differ"
            notes.append(f"over F_{q} the two spaces {verb} in degrees <= {max_degree}")
    if not ring.is_integers:
        same_z = integral_homology(a, max_degree) == integral_homology(b, max_degree)
        if not same_z:
            notes.append("integral homology differs, so agreement over a field is prime-specific")
    return HomologyComparison(equal, left, right, tuple(notes))
