from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdp.algebra import GFP, QQ, PrimeField
from spdp.linalg import EchelonBasis, rank_mod_p, rank_rational, sparse_rank

from oracles import dense_rank, gram_schmidt_dimension


def to_sparse(rows):
    return [{j: v for j, v in enumerate(r) if v} for r in rows]


small_ints = st.integers(-3, 3)
matrices = st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=0, max_size=9))


def test_empty_and_zero_rows():
    assert sparse_rank([]) == 0
    assert sparse_rank([{}, {}]) == 0


def test_identity_like():
    rows = [{i: 1} for i in range(5)]
    assert rank_rational(rows) == 5


def test_dependent_rows():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {1: 1, 2: 1}]
    assert rank_rational(rows) == 2


def test_rational_entries():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 3, 1: 2}]
    assert rank_rational(rows) == 1


def test_characteristic_matters():
    # det = 7: full rank over Q, singular mod 7
    rows = [{0: 1, 1: 2}, {0: 3, 1: 13}]
    assert rank_rational(rows) == 2
    assert rank_mod_p(rows, 7) == 1


def test_unsupported_field():
    with pytest.raises(TypeError):
        sparse_rank([{0: 1}], field="reals")


def test_echelon_insert_reports_growth():
    eb = EchelonBasis(QQ)
    assert eb.insert({0: 1, 1: 1})
    assert not eb.insert({0: 2, 1: 2})
    assert eb.insert({1: 1})
    assert eb.rank == 2
    assert eb.reduce({0: 5, 1: 7}) == {}


@settings(max_examples=150)
@given(matrices)
def test_rational_rank_matches_dense_oracle(rows):
    assert sparse_rank(to_sparse(rows), QQ) == dense_rank(rows)


@settings(max_examples=150)
@given(matrices)
def test_rational_rank_matches_gram_schmidt(rows):
    assert sparse_rank(to_sparse(rows), QQ) == gram_schmidt_dimension(rows)


@settings(max_examples=150)
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_modular_rank_matches_dense_oracle(rows, p):
    assert sparse_rank(to_sparse(rows), PrimeField(p)) == dense_rank(rows, p)


@settings(max_examples=100)
@given(matrices)
def test_modular_rank_never_exceeds_rational(rows):
    sp = to_sparse(rows)
    assert sparse_rank(sp, PrimeField(3)) <= sparse_rank(sp, QQ)
    assert sparse_rank(sp, GFP) == sparse_rank(sp, QQ)


@settings(max_examples=60)
@given(matrices, st.randoms(use_true_random=False))
def test_rank_independent_of_row_order(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert sparse_rank(to_sparse(rows)) == sparse_rank(to_sparse(shuffled))
