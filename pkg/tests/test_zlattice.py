import itertools
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goodspaces.errors import ValidationError
from goodspaces.io import parse_representation
from goodspaces.zlattice import (
    EnumerationSpec,
    IntegerRepresentation,
    describe_lattice_series,
    determinant,
    finite_order,
    finite_order_matrices,
    fixed_subspace_dim,
    hermite_rows,
    is_nilpotent_integer_action,
    lattice_series,
    rational_series,
    rref,
    series_report,
    verify_nilpotent_iff_trivial,
)


def rep(*mats):
    return IntegerRepresentation(len(mats[0]), tuple(mats))


NEG = ((-1,),)
SWAP = ((0, 1), (1, 0))
ROT3 = ((0, -1), (1, -1))


def test_negation_series():
    r = rep(NEG)
    chain = rational_series(r)
    assert chain.dims == (1, 1) and chain.stabilized_at == 1
    assert not is_nilpotent_integer_action(r)
    assert describe_lattice_series(lattice_series(r, 3)) == "Z > 2Z > 4Z"


def test_identity_is_nilpotent():
    r = rep(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert rational_series(r).dims == (3, 0)
    assert is_nilpotent_integer_action(r)


def test_swap_and_rotation():
    assert rational_series(rep(SWAP)).dims == (2, 1, 1)
    assert describe_lattice_series(lattice_series(rep(SWAP), 3)) == "Z^2 > <(1,-1)> > <(2,-2)>"
    assert rational_series(rep(ROT3)).dims == (2, 2)
    assert fixed_subspace_dim(SWAP) == 1 and fixed_subspace_dim(ROT3) == 0


def test_representation_validation():
    with pytest.raises(ValidationError):
        rep(((1, 1), (0, 1)))  # infinite order
    with pytest.raises(ValidationError):
        rep(((2,),))  # not invertible over Z
    with pytest.raises(ValidationError):
        IntegerRepresentation(2, (((1,),),))
    assert finite_order(ROT3) == 3 and finite_order(((1, 1), (0, 1))) is None


def test_file_formats():
    r = parse_representation("1 1\n-1\n")
    assert r.generators == (NEG,)
    r = parse_representation(json.dumps({"rank": 2, "generators": [[[0, 1], [1, 0]]]}))
    assert r.generators == (SWAP,)
    with pytest.raises(ValidationError):
        parse_representation("2 1\n0 1 1")
    with pytest.raises(ValidationError):
        parse_representation('{"rank": 2}')


def _brute_finite_order(r, lo, hi, max_order):
    out = []
    for entries in itertools.product(range(lo, hi + 1), repeat=r * r):
        M = tuple(tuple(entries[i * r : (i + 1) * r]) for i in range(r))
        if abs(determinant(M)) == 1 and finite_order(M, max_order) is not None:
            out.append(M)
    return sorted(out)


@pytest.mark.parametrize("r,lo,hi", [(1, -2, 2), (2, -1, 1), (2, -2, 2)])
def test_vectorized_enumeration_matches_brute_force(r, lo, hi):
    assert sorted(finite_order_matrices(r, lo, hi, 6)) == _brute_finite_order(r, lo, hi, 6)


def test_small_enumeration_report():
    report = verify_nilpotent_iff_trivial(EnumerationSpec(ranks=(1,), entry_min=-1, entry_max=1))
    assert report.checked == 2 and report.nilpotent == 1 and not report.counterexamples
    d = series_report(rep(NEG))
    assert d["lattice_series"] == "Z > 2Z > 4Z" and d["nilpotent"] is False


def _unipotent_oracle(M):
    # g acts nilpotently on Q^r iff (g - 1)^r = 0
    r = len(M)
    N = np.array(M, dtype=object) - np.eye(r, dtype=int).astype(object)
    P = np.eye(r, dtype=int).astype(object)
    for _ in range(r):
        P = P.dot(N)
    return not P.any()


RANK2 = list(finite_order_matrices(2, -2, 2, 6))
RANK3_SAMPLE = random.Random(3).sample(list(finite_order_matrices(3, -1, 1, 6)), 300)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(RANK2 + RANK3_SAMPLE))
def test_series_agrees_with_unipotence(M):
    assert is_nilpotent_integer_action(rep(M)) == _unipotent_oracle(M)


def _unimodular(rng, r):
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(6):
        i, j = rng.sample(range(r), 2)
        k = rng.randint(-2, 2)
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        if rng.random() < 0.3:
            U[i], U[j] = U[j], U[i]
    return U


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10**6), st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_hermite_form_is_canonical(r, seed, entries):
    A = [entries[i * r : (i + 1) * r] for i in range(r)]
    U = _unimodular(random.Random(seed), r)
    UA = [[sum(U[i][k] * A[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
    assert hermite_rows(UA) == hermite_rows(A)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4),
       st.integers(1, 5))
def test_rref_is_canonical(rows, scale):
    shuffled = list(reversed([[scale * x for x in row] for row in rows]))
    assert rref(rows) == rref(shuffled)
    assert len(rref(rows)) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(-6, 6), min_size=16, max_size=16))
def test_determinant_matches_numpy(r, entries):
    M = [entries[i * r : (i + 1) * r] for i in range(r)]
    assert determinant(M) == round(np.linalg.det(np.array(M, dtype=float)))
