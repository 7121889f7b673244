from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from goodspaces.errors import ValidationError
from goodspaces.exprcalc import (
    DirectProduct,
    Finite,
    FreeProduct,
    ParseError,
    euler_characteristic,
    finite_order,
    free_retract_rank,
    kurosh_kernel_rank,
    p_content,
    parse_expr,
    parse_group_expr,
    parse_space_expr,
    to_text,
)
from goodspaces.groups import cyclic
from strategies import group_exprs, space_exprs


def test_printer_has_no_spaces():
    e = parse_expr("free( C(3) , prod(Z, F(2)) )")
    assert to_text(e) == "free(C(3),prod(Z,F(2)))"


@pytest.mark.parametrize("text", [
    "Z", "F(2)", "C(6)", "D(4)", "S(3)", "E(2,3)", "SL2(5)",
    "free(C(3),C(3))", "prod(free(C(3),C(3)),C(5))", "hnn(C(2),1,trivial)", "hnn(Z,2,nontrivial)",
    "B(C(2))", "Sph(1)", "RP(inf)", "RP(2)", "wedge(Sph(1),Sph(2))", "prodsp(RP(2),B(F(2)))",
])
def test_round_trip_examples(text):
    assert to_text(parse_expr(text)) == text


@pytest.mark.parametrize("text,pos", [
    ("free(C(3)", 9), ("free(C(3))", 0), ("C(0)", 0), ("E(4,2)", 0), ("Q(3)", 0),
    ("C(3) x", 5), ("C(3", 3), ("hnn(Z,1,maybe)", 8), ("RP(0)", 0), ("S(3)#", 4),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.position == pos


def test_group_and_space_entry_points():
    with pytest.raises(ValidationError):
        parse_group_expr("Sph(2)")
    with pytest.raises(ValidationError):
        parse_space_expr("C(2)")
    with pytest.raises(ValidationError):
        FreeProduct((Finite(cyclic(2)),))


def test_euler_characteristics():
    assert euler_characteristic(parse_expr("free(C(3),C(3))")) == Fraction(-1, 3)
    assert euler_characteristic(parse_expr("F(3)")) == -2
    assert euler_characteristic(parse_expr("prod(C(2),F(2))")) == Fraction(-1, 2)
    assert euler_characteristic(parse_expr("hnn(C(2),1,trivial)")) == Fraction(-1, 2)
    assert euler_characteristic(parse_expr("Z")) == 0


def _quotient_graph_rank(factors, p):
    """Oracle: rank of the kernel from the Bass-Serre quotient graph.

    The free product acts on its tree; the kernel K of the map onto the
    product Q of the finite factors acts freely, so K is the fundamental group
    of the quotient graph: rank = E - V + 1 with one vertex per coset of each
    finite factor, one per element of Q for the centre, and one edge per
    (factor, element of Q), Z factors contributing loops.
    """
    finite = [f for f in factors if f is not None]
    q = 1
    for a in finite:
        q *= a
    loops = sum(1 for f in factors if f is None)
    V = q + sum(q // a for a in finite)
    E = q * len(finite) + q * loops
    return E - V + 1


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_kernel_rank_of_cp_star_cp(p):
    e = parse_expr(f"free(C({p}),C({p}))")
    assert kurosh_kernel_rank(e, p) == (p - 1) ** 2 == _quotient_graph_rank([p, p], p)


@pytest.mark.parametrize("text,p,factors", [
    ("free(C(2),C(2))", 2, [2, 2]),
    ("free(Z,C(2))", 2, [None, 2]),
    ("free(C(4),C(2),C(2))", 2, [4, 2, 2]),
    ("free(C(3),Z,Z)", 3, [3, None, None]),
    ("free(E(2,2),C(8))", 2, [4, 8]),
    ("free(free(C(3),C(9)),C(3))", 3, [3, 9, 3]),
])
def test_kernel_rank_matches_quotient_graph(text, p, factors):
    assert kurosh_kernel_rank(parse_expr(text), p) == _quotient_graph_rank(factors, p)


def test_kernel_rank_examples():
    assert kurosh_kernel_rank(parse_expr("free(C(3),C(3))"), 3) == 4
    assert kurosh_kernel_rank(parse_expr("free(C(2),C(2))"), 2) == 1
    assert kurosh_kernel_rank(parse_expr("free(Z,C(2))"), 2) == 2


def test_kernel_rank_inadmissible():
    with pytest.raises(ValidationError):
        kurosh_kernel_rank(parse_expr("free(C(3),C(2))"), 3)
    with pytest.raises(ValidationError):
        kurosh_kernel_rank(parse_expr("C(3)"), 3)
    with pytest.raises(ValidationError):
        kurosh_kernel_rank(parse_expr("free(C(3),C(3))"), 4)


def test_p_content():
    pc = p_content(parse_expr("free(C(2),C(3),S(3))"), 2)
    assert pc.p_torsion_count == 2 and not pc.sylow_finite
    assert [f.factor for f in pc.factors] == ["C(2)", "C(3)", "S(3)"]
    assert [f.p_quotient_nontrivial for f in pc.factors] == [True, False, True]
    pc = p_content(parse_expr("free(Z,C(3))"), 3)
    assert pc.factors[0].is_infinite_torsion_free and pc.factors[0].p_quotient_nontrivial is None
    pc = p_content(parse_expr("free(SL2(5),C(5))"), 2)
    # SL(2,5) is perfect: trivial 2-quotient despite even order
    assert pc.factors[0].has_p_torsion and pc.factors[0].p_quotient_nontrivial is False


def test_structural_helpers():
    assert finite_order(parse_expr("free(C(1),C(6))")) == 6
    assert finite_order(parse_expr("free(C(2),C(3))")) is None
    assert free_retract_rank(parse_expr("prod(F(2),C(3))")) == 2
    assert free_retract_rank(parse_expr("free(Z,Z,C(2))")) == 2
    assert free_retract_rank(parse_expr("hnn(C(2),3,nontrivial)")) == 3


@settings(max_examples=300, deadline=None)
@given(group_exprs)
def test_round_trip_property(e):
    text = to_text(e)
    assert parse_expr(text) == e
    assert to_text(parse_expr(text.replace(",", " , "))) == text


@settings(max_examples=100, deadline=None)
@given(space_exprs)
def test_space_round_trip_property(s):
    assert parse_expr(to_text(s)) == s


@settings(max_examples=200, deadline=None)
@given(group_exprs, group_exprs)
def test_euler_laws(a, b):
    ca, cb = euler_characteristic(a), euler_characteristic(b)
    assert euler_characteristic(DirectProduct((a, b))) == ca * cb
    assert euler_characteristic(FreeProduct((a, b))) == ca + cb - 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([2, 4, 8, None]), min_size=2, max_size=4))
def test_kernel_rank_property(factors):
    kids = ["Z" if f is None else f"C({f})" for f in factors]
    e = parse_expr("free(" + ",".join(kids) + ")")
    assert kurosh_kernel_rank(e, 2) == _quotient_graph_rank(factors, 2)
