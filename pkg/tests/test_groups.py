import itertools

import pytest
from hypothesis import given, settings, strategies as st

from goodspaces.errors import ResourceLimitError, ValidationError
from goodspaces.groups import (
    FiniteGroup,
    all_subgroups,
    build_group,
    cyclic,
    dihedral,
    direct_product,
    element_by_name,
    elementary_abelian,
    explicit,
    generate,
    is_generated_by_order_m,
    is_p_group,
    lower_p_central_series,
    normalizer,
    o_p_residual,
    quotient_group,
    sl2,
    sylow_subgroup,
    symmetric,
)
from goodspaces.io import parse_table
from goodspaces.numtheory import factorize, p_part
from small_groups import p_groups_up_to_16, signature

SMALL = [cyclic(6), cyclic(8), dihedral(4), dihedral(6), symmetric(3), symmetric(4), sl2(3),
         elementary_abelian(2, 3), direct_product(cyclic(2), symmetric(3))]


def test_constructor_orders():
    assert build_group(cyclic(6)).order == 6
    assert build_group(dihedral(5)).order == 10
    assert build_group(symmetric(4)).order == 24
    assert build_group(elementary_abelian(3, 2)).order == 9
    assert build_group(direct_product(cyclic(2), cyclic(3))).order == 6


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sl2_order_matches_matrix_count(p):
    # independent count: 2x2 matrices over F_p with determinant 1
    count = sum(1 for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1)
    assert build_group(sl2(p)).order == count == p * (p * p - 1)


def test_element_naming():
    assert build_group(cyclic(4)).names == ("0", "1", "2", "3")
    D = build_group(dihedral(3))
    assert D.names[:3] == ("r0", "r1", "r2") and D.names[3] == "s0"
    S = build_group(symmetric(3))
    assert S.names[S.identity] == "()"
    assert element_by_name(S, "(1 2)") != S.identity
    E = build_group(elementary_abelian(3, 2))
    assert E.names[1] == "(1,0)" and E.names[3] == "(0,1)"
    with pytest.raises(ValidationError):
        element_by_name(S, "(1 4)")


def test_dihedral_relation():
    n = 5
    D = build_group(dihedral(n))
    r, s = 1, n
    assert D.element_order(r) == n and D.element_order(s) == 2
    assert D.mul(D.mul(s, r), D.inv(s)) == D.inv(r)


def test_invalid_tables_rejected():
    with pytest.raises(ValidationError):
        FiniteGroup.from_table([[0, 1], [1, 1]])  # not a Latin square
    # a Latin square without an associative law: x*y = x - y mod 3 has no identity
    with pytest.raises(ValidationError):
        FiniteGroup.from_table([[(x - y) % 3 for y in range(3)] for x in range(3)])
    # loop of order 5 (identity 0, Latin) that is not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(ValidationError):
        FiniteGroup.from_table(loop)


def test_size_limits():
    with pytest.raises(ResourceLimitError):
        build_group(cyclic(10_000))
    with pytest.raises(ResourceLimitError):
        build_group(symmetric(7))
    with pytest.raises(ValidationError):
        cyclic(0)
    with pytest.raises(ValidationError):
        elementary_abelian(4, 2)


def test_table_file_roundtrip():
    G = build_group(symmetric(3))
    text = f"{G.order}\n" + "\n".join(" ".join(map(str, row)) for row in G.table)
    H = parse_table(text)
    assert H.table == G.table
    with pytest.raises(ValidationError):
        parse_table("2\n0 1 1")


@pytest.mark.parametrize("desc", SMALL, ids=lambda d: d.text())
def test_sylow_order_is_full_p_part(desc):
    G = build_group(desc)
    for p in factorize(G.order):
        S = sylow_subgroup(G, p)
        assert S.order == p_part(G.order, p)
        assert S.is_closed() and is_p_group(S.as_group(), p)


def test_sylow_against_exhaustive_subgroups():
    # oracle: largest 2-power subgroup order among all subgroups of S4
    G = build_group(symmetric(4))
    subs = all_subgroups(G)
    assert len(subs) == 30
    best = max(H.order for H in subs if is_p_group(H.as_group(), 2))
    assert best == sylow_subgroup(G, 2).order == 8


def test_normalizer_contains_subgroup():
    G = build_group(symmetric(4))
    S = sylow_subgroup(G, 3)
    N = normalizer(S)
    assert S.issubset(N) and N.order == 6


def test_o_p_residual():
    S3 = build_group(symmetric(3))
    N, Q = o_p_residual(S3, 2)
    assert N.order == 3 and Q.order == 2
    N, Q = o_p_residual(S3, 3)
    assert N.order == 6 and Q.order == 1
    # oracle: the subgroup generated by p'-elements
    for desc in SMALL:
        G = build_group(desc)
        for p in factorize(G.order):
            pprime = [g for g in G.elements if G.element_order(g) % p]
            assert o_p_residual(G, p)[0] == generate(G, pprime)


def test_quotient_group():
    G = build_group(dihedral(4))
    center = generate(G, [2])
    Q = quotient_group(G, center)
    assert Q.order == 4 and Q.is_abelian()


def test_lower_p_central_series():
    assert lower_p_central_series(build_group(cyclic(4)), 2).orders == [4, 2, 1]
    chain = lower_p_central_series(build_group(cyclic(3)), 2)
    assert chain.stabilized and not chain.reaches_trivial
    assert lower_p_central_series(build_group(dihedral(4)), 2).reaches_trivial
    assert lower_p_central_series(build_group(symmetric(4)), 2).orders == [24, 12, 12]


def test_generated_by_order():
    assert is_generated_by_order_m(build_group(symmetric(4)), 2)
    assert not is_generated_by_order_m(build_group(cyclic(4)), 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=2, max_size=3))
def test_products_of_cyclics(orders):
    G = build_group(direct_product(*(cyclic(n) for n in orders)))
    prod = 1
    for n in orders:
        prod *= n
    assert G.order == prod and G.is_abelian()
    for p in factorize(prod):
        assert sylow_subgroup(G, p).order == p_part(prod, p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.lists(st.integers(0, 10**6), max_size=3))
def test_generated_subgroups_are_closed(desc, seeds):
    G = build_group(desc)
    gens = [s % G.order for s in seeds]
    H = generate(G, gens)
    assert H.is_closed() and all(g in H for g in gens)
    assert G.order % H.order == 0


def test_explicit_descriptor():
    T = build_group(cyclic(5)).table
    G = build_group(explicit(T))
    assert G.order == 5 and G.is_abelian()


def test_p_group_catalogue_is_complete():
    # 1, 2, 5 and 14 groups of orders 2, 4, 8, 16; signatures separate them
    sigs = [signature(build_group(d)) for descs in p_groups_up_to_16().values() for d in descs]
    assert len(set(sigs)) == len(sigs)
    counts = {}
    for s in sigs:
        counts[s[0]] = counts.get(s[0], 0) + 1
    assert counts == {2: 1, 4: 2, 8: 5, 16: 14, 3: 1, 9: 2, 5: 1, 7: 1, 11: 1, 13: 1}
    assert all(is_p_group(build_group(d), p) for p, descs in p_groups_up_to_16().items() for d in descs)
