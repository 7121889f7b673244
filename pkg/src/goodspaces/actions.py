"""Group actions on finite groups and their nilpotency.

An action is stored as its list of images: ``images[g]`` is the permutation
of target elements by which actor element ``g`` acts. Composition follows
``(s * t)[x] = s[t[x]]`` so that ``images[g h] = images[g] * images[h]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .groups import (
    FiniteGroup,
    SeriesChain,
    Subgroup,
    _descend,
    all_subgroups,
    build_group,
    elementary_abelian,
    generate,
    sl2,
)
from .numtheory import require_prime

Perm = tuple[int, ...]

BRUTE_FORCE_MAX_TARGET = 24


def compose(s: Perm, t: Perm) -> Perm:
    return tuple(s[x] for x in t)


def perm_order(s: Perm) -> int:
    ident = tuple(range(len(s)))
    k, cur = 1, s
    while cur != ident:
        cur = compose(cur, s)
        k += 1
    return k


@dataclass(frozen=True, eq=False)
class FiniteAction:
    """Actor acting on target by automorphisms.

    Constructing directly skips validation; use :func:`build_action` for
    untrusted input.
    """

    actor: FiniteGroup
    target: FiniteGroup
    images: tuple[Perm, ...]
    generators: tuple[int, ...] = ()

    def act(self, g: int, x: int) -> int:
        return self.images[g][x]

    @property
    def distinct_images(self) -> list[Perm]:
        ident = tuple(range(self.target.order))
        return sorted({im for im in self.images if im != ident})

    def is_trivial(self) -> bool:
        return not self.distinct_images


@dataclass(frozen=True)
class NilpotencyDecision:
    nilpotent: bool
    series: SeriesChain
    witness: SeriesChain | None = None
    obstruction: Subgroup | None = None


def is_automorphism(G: FiniteGroup, s: Perm) -> bool:
    if sorted(s) != list(G.elements):
        return False
    t = G.table
    return all(s[t[a][b]] == t[s[a]][s[b]] for a in G.elements for b in G.elements)


def build_action(actor: FiniteGroup, target: FiniteGroup, hom: Mapping[int, Sequence[int]] | Sequence[Sequence[int]], generators: Sequence[int] = ()) -> FiniteAction:
    """Validate a full homomorphism actor -> Aut(target) given elementwise."""
    if isinstance(hom, Mapping):
        missing = [g for g in actor.elements if g not in hom]
        if missing:
            raise ValidationError(f"hom undefined on actor elements {missing}")
        images = tuple(tuple(int(x) for x in hom[g]) for g in actor.elements)
    else:
        images = tuple(tuple(int(x) for x in im) for im in hom)
        if len(images) != actor.order:
            raise ValidationError("hom must give one image per actor element")
    for g, im in enumerate(images):
        if len(im) != target.order or not is_automorphism(target, im):
            raise ValidationError(f"image of actor element {actor.names[g]} is not an automorphism of the target")
    if images[actor.identity] != tuple(range(target.order)):
        raise ValidationError("identity does not act trivially")
    arr = np.asarray(images, dtype=np.int64)
    for g in actor.elements:
        # row h of arr[g][arr] is images[g] o images[h]; must equal images[g h]
        if not np.array_equal(arr[g][arr], arr[list(actor.table[g])]):
            raise ValidationError("hom is not a homomorphism")
    return FiniteAction(actor, target, images, tuple(generators))


def _extend(G: FiniteGroup, gens: Sequence[int], gen_images: Sequence, mul: Callable, one) -> dict | None:
    """Extend generator images to a hom on <gens>; None when inconsistent."""
    phi = {G.identity: one}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            fx = phi[x]
            for g, fg in zip(gens, gen_images):
                y = G.mul(x, g)
                fy = mul(fx, fg)
                old = phi.get(y)
                if old is None:
                    phi[y] = fy
                    nxt.append(y)
                elif old != fy:
                    return None
        frontier = nxt
    return phi


def action_from_generators(actor: FiniteGroup, target: FiniteGroup, gen_images: Mapping[int, Sequence[int]]) -> FiniteAction:
    """Extend images of a generating set of the actor, then validate everything."""
    gens = sorted(gen_images)
    if not generate(actor, gens).is_whole():
        raise ValidationError("given actor elements do not generate the actor")
    ims = [tuple(int(x) for x in gen_images[g]) for g in gens]
    for g, im in zip(gens, ims):
        if len(im) != target.order or not is_automorphism(target, im):
            raise ValidationError(f"image of actor element {actor.names[g]} is not an automorphism of the target")
    phi = _extend(actor, gens, ims, compose, tuple(range(target.order)))
    if phi is None:
        raise ValidationError("generator images do not extend to a homomorphism")
    return build_action(actor, target, phi, gens)


def trivial_action(actor: FiniteGroup, target: FiniteGroup) -> FiniteAction:
    ident = tuple(range(target.order))
    return FiniteAction(actor, target, (ident,) * actor.order)


def _sl2_matrices(p: int) -> list[tuple[int, int, int, int]]:
    # same enumeration order as groups._build for SL2
    import itertools

    return [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]


def triangular_sl2_action(p: int) -> FiniteAction:
    """The group generated by [[1,1],[0,1]] and [[1,0],[1,1]] in SL(2,p) acting on F_p^2.

    This is the finite image of C_p * C_p with one factor sent to each
    unipotent triangular matrix. Target element a0 + p*a1 is the vector (a0, a1).
    """
    require_prime(p)
    if p > 7:
        raise ResourceLimitError("triangular_sl2_action supports p <= 7")
    S = build_group(sl2(p))
    mats = _sl2_matrices(p)
    upper, lower = mats.index((1, 1, 0, 1)), mats.index((1, 0, 1, 1))
    H = generate(S, [upper, lower])
    actor = H.as_group()
    target = build_group(elementary_abelian(p, 2))

    def act(m, i):
        a0, a1 = i % p, i // p
        return (m[0] * a0 + m[1] * a1) % p + p * ((m[2] * a0 + m[3] * a1) % p)

    images = tuple(tuple(act(mats[x], i) for i in range(p * p)) for x in H.elements)
    pos = {x: i for i, x in enumerate(H.elements)}
    return FiniteAction(actor, target, images, (pos[upper], pos[lower]))


def _twisted_step(a: FiniteAction) -> Callable[[Subgroup], Subgroup]:
    T = a.target
    autos = a.distinct_images
    abelian = T.is_abelian()

    def step(H: Subgroup) -> Subgroup:
        gens: set[int] = set()
        # for abelian T, h -> h^-1 s(h) is a hom on H, so generators suffice
        elems = H.generators() if abelian else H.elements
        if not abelian:
            gens.update(T.commutator(x, y) for x in H.elements for y in H.elements)
        for s in autos:
            gens.update(T.mul(T.inv(x), s[x]) for x in elems)
        return generate(T, sorted(gens))

    return step


def action_series(a: FiniteAction) -> SeriesChain:
    """T_1 = target, T_{j+1} = <[T_j, T_j], h^-1 g(h) : h in T_j, g acting>.

    Every filtration with abelian, trivially-acted quotients contains this
    series termwise, so it reaches 1 exactly when the action is nilpotent.
    """
    return _descend(a.target.whole(), _twisted_step(a))


def is_nilpotent_action(a: FiniteAction) -> NilpotencyDecision:
    series = action_series(a)
    if series.reaches_trivial:
        return NilpotencyDecision(True, series, witness=series)
    return NilpotencyDecision(False, series, obstruction=series.last)


def filtration_step_ok(a: FiniteAction, upper: Subgroup, lower: Subgroup) -> bool:
    """The four conditions for consecutive terms upper > lower, verbatim."""
    T = a.target
    images = a.images
    for H in (upper, lower):
        if any(s[x] not in H for s in images for x in H.elements):
            return False
    if not lower.issubset(upper) or not lower.is_normal(upper):
        return False
    if any(T.commutator(x, y) not in lower for x in upper.elements for y in upper.elements):
        return False
    return all(T.mul(T.inv(x), s[x]) in lower for s in images for x in upper.elements)


def brute_force_nilpotency(a: FiniteAction, max_target: int = BRUTE_FORCE_MAX_TARGET) -> bool:
    """Search for a filtration target = G_1 > ... > G_n = 1 satisfying the definition."""
    T = a.target
    if T.order > max_target:
        raise ResourceLimitError(f"brute force limited to targets of order <= {max_target}")
    images = a.images
    closed = [H for H in all_subgroups(T) if all(s[x] in H for s in images for x in H.elements)]

    @lru_cache(maxsize=None)
    def reach(i: int) -> bool:
        H = closed[i]
        if H.is_trivial():
            return True
        return any(
            K.order < H.order and H.order % K.order == 0 and K.issubset(H)
            and filtration_step_ok(a, H, K) and reach(j)
            for j, K in enumerate(closed)
        )

    top = next(i for i, H in enumerate(closed) if H.is_whole())
    return reach(top)


# ---------------------------------------------------------------------------
# enumeration


def automorphisms(G: FiniteGroup) -> list[Perm]:
    """All automorphisms of a small group, as permutations of its elements."""
    gens = G.whole().generators()
    candidates = [[y for y in G.elements if G.element_order(y) == G.element_order(g)] for g in gens]
    out = []

    def rec(i, chosen):
        if i == len(gens):
            phi = _extend(G, gens, chosen, G.mul, G.identity)
            if phi is not None and len(set(phi.values())) == G.order:
                out.append(tuple(phi[x] for x in G.elements))
            return
        for y in candidates[i]:
            if _extend(G, gens[: i + 1], chosen + [y], G.mul, G.identity) is not None:
                rec(i + 1, chosen + [y])

    rec(0, [])
    return sorted(out)


def enumerate_homomorphisms(actor: FiniteGroup, perms: Sequence[Perm]) -> Iterator[tuple[Perm, ...]]:
    """Every hom from actor into the group of permutations ``perms`` (assumed closed)."""
    if not perms:
        return
    gens = actor.whole().generators()
    one = tuple(range(len(perms[0])))
    pool = sorted(set(perms) | {one})
    orders = {s: perm_order(s) for s in pool}
    cands = [[s for s in pool if actor.element_order(g) % orders[s] == 0] for g in gens]

    yield from _backtrack(actor, gens, cands, compose, one)


def _backtrack(actor: FiniteGroup, gens, cands, mul, one, prefilter=None):
    """Depth-first assignment of generator images, pruned by partial extension."""
    commuting = [[j for j, h in enumerate(gens[:i]) if actor.mul(g, h) == actor.mul(h, g)] for i, g in enumerate(gens)]
    if prefilter is None:
        def prefilter(i, chosen):
            return [s for s in cands[i] if all(mul(s, chosen[j]) == mul(chosen[j], s) for j in commuting[i])]

    def rec(i, chosen):
        if i == len(gens):
            phi = _extend(actor, gens, chosen, mul, one)
            yield tuple(phi[x] for x in actor.elements)
            return
        for s in prefilter(i, chosen):
            if _extend(actor, gens[: i + 1], chosen + [s], mul, one) is not None:
                yield from rec(i + 1, chosen + [s])

    yield from rec(0, [])



def enumerate_actions(actor: FiniteGroup, target: FiniteGroup, autos: Sequence[Perm] | None = None) -> Iterator[FiniteAction]:
    if autos is None:
        autos = automorphisms(target)
    for images in enumerate_homomorphisms(actor, autos):
        yield FiniteAction(actor, target, images)


def direct_sum_action(a: FiniteAction, b: FiniteAction) -> FiniteAction:
    """Same actor acting diagonally on target_a x target_b (index i*|B| + j)."""
    if a.actor is not b.actor:
        raise ValidationError("direct sum needs a common actor")
    A, B = a.target, b.target
    nb = B.order
    table = tuple(
        tuple(A.mul(i // nb, k // nb) * nb + B.mul(i % nb, k % nb) for k in range(A.order * nb))
        for i in range(A.order * nb)
    )
    names = tuple(f"({x},{y})" for x in A.names for y in B.names)
    target = FiniteGroup(table, A.identity * nb + B.identity, names)
    images = tuple(
        tuple(sa[i // nb] * nb + sb[i % nb] for i in range(A.order * nb)) for sa, sb in zip(a.images, b.images)
    )
    return FiniteAction(a.actor, target, images)


# Linear actions on E(p, k): matrices act on column vectors, and target
# element sum(a_j p^j) is the vector (a_0, ..., a_{k-1}).


def _matmul_mod(p: int, k: int):
    @lru_cache(maxsize=1 << 16)
    def mul(x, y):
        return tuple(
            sum(x[i * k + t] * y[t * k + j] for t in range(k)) % p for i in range(k) for j in range(k)
        )

    return mul


def matrices_of_order_dividing(p: int, k: int, m: int) -> list[tuple[int, ...]]:
    """All k x k matrices over F_p with M^m = I (row-major tuples)."""
    total = p ** (k * k)
    eye = np.eye(k, dtype=np.int64)
    out = []
    chunk = 1 << 17
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        digits = np.stack(np.unravel_index(idx, (p,) * (k * k)), axis=1).astype(np.int64)
        M = digits.reshape(-1, k, k)
        P = np.broadcast_to(eye, M.shape).copy()
        for _ in range(m):
            P = np.matmul(P, M) % p
        ok = np.all(P == eye, axis=(1, 2))
        out.extend(tuple(int(v) for v in row) for row in digits[ok])
    return out


@lru_cache(maxsize=1 << 16)
def linear_permutation(p: int, k: int, M: tuple[int, ...]) -> Perm:
    n = p**k
    vecs = np.stack(np.unravel_index(np.arange(n), (p,) * k)[::-1], axis=1)  # column j = coordinate j
    img = (vecs @ np.asarray(M, dtype=np.int64).reshape(k, k).T) % p
    return tuple(int(x) for x in img @ (p ** np.arange(k)))


def linear_action(actor: FiniteGroup, p: int, k: int, matrices: Sequence[Sequence[int]]) -> FiniteAction:
    """Action of actor on E(p, k) with ``matrices[g]`` the matrix of element g (unchecked)."""
    target = build_group(elementary_abelian(p, k))
    images = tuple(linear_permutation(p, k, tuple(M)) for M in matrices)
    return FiniteAction(actor, target, images)


def enumerate_linear_actions(actor: FiniteGroup, p: int, k: int) -> Iterator[FiniteAction]:
    """Every action of actor on E(p, k), i.e. every hom actor -> GL(k, p)."""
    require_prime(p)
    gens = actor.whole().generators()
    one = tuple(int(i == j) for i in range(k) for j in range(k))
    by_order: dict[int, list] = {}
    cands = []
    for g in gens:
        m = actor.element_order(g)
        if m not in by_order:
            by_order[m] = matrices_of_order_dividing(p, k, m)
        cands.append(by_order[m])
    arrays = [np.asarray(c, dtype=np.int64).reshape(-1, k, k) for c in cands]
    commuting = [[j for j, h in enumerate(gens[:i]) if actor.mul(g, h) == actor.mul(h, g)] for i, g in enumerate(gens)]

    def prefilter(i, chosen):
        A = arrays[i]
        if len(A) == 0:
            return []
        mask = np.ones(len(A), dtype=bool)
        for j in commuting[i]:
            T = np.asarray(chosen[j], dtype=np.int64).reshape(k, k)
            mask &= np.all((A @ T) % p == (T @ A) % p, axis=(1, 2))
        return [cands[i][n] for n in np.flatnonzero(mask)]

    for mats in _backtrack(actor, gens, cands, _matmul_mod(p, k), one, prefilter):
        yield linear_action(actor, p, k, mats)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first, *rest)


def _nullspace_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    rows = [[x % p for x in r] for r in rows]
    ncols = len(rows[0])
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free] % p
        basis.append(v)
    return basis


def gl_order(p: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= p**k - p**i
    return out


def unipotent_classes(p: int, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """(Jordan type, matrix, class size) for each unipotent conjugacy class of GL(k, p).

    Classes are indexed by Jordan types (partitions of k). A class has size
    |GL(k, p)| / |C(U)|, where the centralizer C(U) is counted as the units
    of the commutant algebra {X : XU = UX}.
    """
    require_prime(p)
    if not 1 <= k <= 3:
        raise ValidationError("unipotent classes supported for ranks 1..3")
    from .zlattice import _det_batch

    out = []
    for parts in _partitions(k):
        U = np.eye(k, dtype=np.int64)
        start = 0
        for size in parts:
            for i in range(start, start + size - 1):
                U[i, i + 1] = 1
            start += size
        # X U - U X = 0 as a linear system in the k*k entries of X
        eqs = []
        for i in range(k):
            for j in range(k):
                row = [0] * (k * k)
                for t in range(k):
                    row[i * k + t] += int(U[t, j])
                    row[t * k + j] -= int(U[i, t])
                eqs.append(row)
        basis = np.asarray(_nullspace_mod_p(eqs, p), dtype=np.int64)
        d = len(basis)
        if d == k * k:
            units = gl_order(p, k)
        else:
            units = 0
            total = p**d
            for lo in range(0, total, 1 << 16):
                idx = np.arange(lo, min(total, lo + (1 << 16)))
                coeffs = np.stack(np.unravel_index(idx, (p,) * d), axis=1).astype(np.int64)
                X = ((coeffs @ basis) % p).reshape(-1, k, k)
                units += int(np.count_nonzero(_det_batch(X) % p))
        out.append((parts, tuple(int(x) for x in U.flat), gl_order(p, k) // units))
    return out


def cyclic_linear_action_classes(p: int, k: int) -> list[tuple[FiniteAction, int]]:
    """Actions of C_p on E(p, k) up to isomorphism, each with the number of actions it stands for.

    An action of C_p is a matrix U with U^p = 1: a unipotent matrix whose
    Jordan blocks have size at most p. Conjugating U by GL(k, p) gives an
    isomorphic action.
    """
    from .groups import cyclic

    actor = build_group(cyclic(p))
    mul = _matmul_mod(p, k)
    out = []
    for parts, U, size in unipotent_classes(p, k):
        if parts[0] > p:
            continue
        # element g of C_p is the g-th power of the generator
        powers = [tuple(int(i == j) for i in range(k) for j in range(k))]
        for _ in range(p - 1):
            powers.append(mul(powers[-1], U))
        out.append((linear_action(actor, p, k, powers), size))
    return out
