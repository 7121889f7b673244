"""Random expression generators shared by the property and acceptance tests."""
import random

from hypothesis import strategies as st

from goodspaces.exprcalc import (
    ClassifyingSpace,
    DirectProduct,
    Finite,
    FreeGroup,
    FreeProduct,
    HNN,
    Product,
    RealProjective,
    Sphere,
    Wedge,
    Z,
)
from goodspaces.groups import cyclic, dihedral, elementary_abelian, sl2, symmetric

finite_leaves = st.one_of(
    st.integers(1, 12).map(lambda n: Finite(cyclic(n))),
    st.integers(2, 6).map(lambda n: Finite(dihedral(n))),
    st.integers(1, 4).map(lambda n: Finite(symmetric(n))),
    st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 2)).map(lambda t: Finite(elementary_abelian(*t))),
    st.sampled_from([2, 3]).map(lambda p: Finite(sl2(p))),
)

group_leaves = st.one_of(finite_leaves, st.just(Z()), st.integers(1, 3).map(FreeGroup))


def _group_nodes(children):
    kids = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(
        kids.map(FreeProduct),
        kids.map(DirectProduct),
        st.builds(HNN, children, st.integers(1, 3), st.booleans()),
    )


group_exprs = st.recursive(group_leaves, _group_nodes, max_leaves=8)

space_leaves = st.one_of(
    group_exprs.map(ClassifyingSpace),
    st.integers(1, 4).map(Sphere),
    st.one_of(st.none(), st.integers(1, 4)).map(RealProjective),
)


def _space_nodes(children):
    kids = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(kids.map(Wedge), kids.map(Product))


space_exprs = st.recursive(space_leaves, _space_nodes, max_leaves=6)


# seeded generators (deterministic corpora for the acceptance suite)

_FINITE = [
    lambda r: Finite(cyclic(r.randint(1, 12))),
    lambda r: Finite(dihedral(r.randint(2, 6))),
    lambda r: Finite(symmetric(r.randint(1, 4))),
    lambda r: Finite(elementary_abelian(r.choice([2, 3, 5]), r.randint(1, 2))),
    lambda r: Finite(sl2(r.choice([2, 3]))),
]


def random_group_expr(r: random.Random, depth: int = 3):
    if depth == 0 or r.random() < 0.3:
        roll = r.random()
        if roll < 0.15:
            return Z()
        if roll < 0.3:
            return FreeGroup(r.randint(1, 3))
        return r.choice(_FINITE)(r)
    kind = r.choice(["free", "prod", "hnn"])
    if kind == "hnn":
        return HNN(random_group_expr(r, depth - 1), r.randint(1, 3), r.random() < 0.5)
    kids = tuple(random_group_expr(r, depth - 1) for _ in range(r.randint(2, 3)))
    return FreeProduct(kids) if kind == "free" else DirectProduct(kids)


def random_space_expr(r: random.Random, depth: int = 2):
    if depth == 0 or r.random() < 0.4:
        roll = r.random()
        if roll < 0.5:
            return ClassifyingSpace(random_group_expr(r, 2))
        if roll < 0.75:
            return Sphere(r.randint(1, 4))
        return RealProjective(r.choice([None, 1, 2, 3, 4]))
    kids = tuple(random_space_expr(r, depth - 1) for _ in range(r.randint(2, 3)))
    return Wedge(kids) if r.random() < 0.5 else Product(kids)


def _p_groups(p):
    if p == 2:
        return [Finite(cyclic(2)), Finite(cyclic(4)), Finite(elementary_abelian(2, 2)), Finite(dihedral(4))]
    out = [Finite(cyclic(p)), Finite(elementary_abelian(p, 2))]
    if p * p <= 49:
        out.append(Finite(cyclic(p * p)))
    return out


def bad_free_product(r: random.Random, p: int):
    """A free product of p-groups that is p-bad: two or more factors, not C2*C2."""
    pool = _p_groups(p)
    while True:
        kids = tuple(r.choice(pool) for _ in range(r.randint(2, 3)))
        if p == 2 and len(kids) == 2 and all(k.order == 2 for k in kids):
            continue
        return FreeProduct(kids)


def mixed_prime_instance(r: random.Random, universe=(2, 3, 5, 7, 11, 13)):
    """Random group built from bad free products at primes I and coprime finite p-groups elsewhere.

    Returns (expr, I).
    """
    bad = sorted(r.sample([2, 3, 5, 7], r.randint(1, 3)))
    pool = [bad_free_product(r, p) for p in bad]
    others = [q for q in universe if q not in bad]
    for q in r.sample(others, r.randint(0, len(others))):
        # at most one finite q-group per prime q outside I
        pool.append(r.choice(_p_groups(q)) if q <= 7 else Finite(cyclic(q)))
    r.shuffle(pool)
    while len(pool) > 1:
        k = min(len(pool), r.randint(2, 3))
        kids = tuple(pool.pop() for _ in range(k))
        pool.insert(r.randrange(len(pool) + 1), FreeProduct(kids) if r.random() < 0.5 else DirectProduct(kids))
    return pool[0], set(bad)
