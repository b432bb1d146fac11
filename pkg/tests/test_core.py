from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdp.algebra import GFP, MULTILINEAR, STANDARD, Polynomial, PrimeField, parse_polynomial
from spdp.core import (CUMULATIVE, BlockPartition, RankReport, SpdpParams, ambient_basis,
                       blocked_matrix, build_matrix, codimension, generators, keep_all, keep_none,
                       labels_text, rank, read_triplets, spdp_rank, write_triplets)
from spdp.errors import BudgetExceededError
from spdp.families import toy_example

from oracles import dense_rank, gram_schmidt_dimension, ml_poly, ml_spdp_rank


def as_oracle(p):
    return ml_poly({tuple(i for i in range(p.n) if k >> i & 1): c for k, c in p.terms.items()})


@st.composite
def ml_polys(draw, max_n=6, max_deg=4):
    n = draw(st.integers(1, max_n))
    masks = st.integers(0, 2 ** n - 1).filter(lambda m: bin(m).count("1") <= max_deg)
    terms = draw(st.dictionaries(masks, st.integers(-3, 3), max_size=6))
    return Polynomial(n, terms, MULTILINEAR)


# -----------------------------
# Ambient basis and generators
# -----------------------------

def test_toy_basis():
    B = ambient_basis(toy_example(), SpdpParams(1, 1))
    assert B.D == 2
    assert [str(B.monomial(j)) for j in range(B.N)] == [
        "1", "x1", "x2", "x3", "x1*x2", "x1*x3", "x2*x3"]
    assert all(B.index[k] == j for j, k in enumerate(B.monomials))


def test_constant_basis_clamps_degree():
    B = ambient_basis(Polynomial.constant(3, 5), SpdpParams(1, 0))
    assert B.D == 0 and B.N == 1


def test_basis_size_n4_d1():
    p = parse_polynomial("x1*x2", n=4)
    assert ambient_basis(p, SpdpParams(1, 0)).N == 5


def test_basis_budget():
    p = parse_polynomial("x1*x2*x3", n=20)
    with pytest.raises(BudgetExceededError):
        ambient_basis(p, SpdpParams(0, 3, budget=100))


def test_toy_generator_count():
    gens = list(generators(toy_example(), SpdpParams(1, 1)))
    assert len(gens) == 12
    assert {g.S for g in gens} == {(0,), (1,), (2,)}
    assert {str(g.m) for g in gens} == {"1", "x1", "x2", "x3"}


def test_kappa_zero_ell_zero_is_p():
    p = toy_example()
    (g,) = generators(p, SpdpParams(0, 0))
    assert g.poly == p and g.S == ()


def test_over_differentiation_gives_zero_rows():
    M = build_matrix(toy_example(), SpdpParams(3, 1))
    assert M.nrows == 4 and M.nnz == 0


def test_drop_zero_rows_keeps_rank():
    p = parse_polynomial("x1*x2 + x3", n=4)
    full = codimension(p, SpdpParams(1, 1))
    lean = codimension(p, SpdpParams(1, 1, drop_zero_rows=True))
    assert lean.gamma == full.gamma and lean.rows < full.rows


# -----------------------------
# Matrix and rank
# -----------------------------

def test_toy_matrix_and_rank():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    assert M.shape == (12, 7)
    rep = rank(M)
    assert (rep.gamma, rep.ambient_dim, rep.codim) == (6, 7, 1)
    assert dense_rank(M.to_dense()) == 6
    assert ml_spdp_rank(as_oracle(toy_example()), 3, 1, 1) == (6, 7)


def test_toy_row_entries():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    row = dict(zip(labels_text(M), M.rows))
    # d/dx2 (x1x2 + x2x3) = x1 + x3; shifted by x1 gives x1 + x1x3
    assert row["d{x2} * x1"] == {1: 1, 5: 1}
    assert row["d{x1} * x3"] == {6: 1}


def test_zero_polynomial():
    z = Polynomial.zero(3)
    M = build_matrix(z, SpdpParams(1, 2))
    assert M.nnz == 0
    rep = rank(M)
    assert rep.gamma == 0 and rep.codim == rep.ambient_dim


def test_zero_polynomial_codim_seven():
    # pad the degree so N matches the toy basis
    rep = codimension(Polynomial.zero(3), SpdpParams(0, 2))
    assert rep.ambient_dim == 7 and rep.codim == 7


def test_single_variable():
    M = build_matrix(parse_polynomial("x1"), SpdpParams(1, 0))
    assert M.rows == [{0: 1}]
    assert rank(M).gamma == 1


def test_full_span_has_codim_zero():
    # p = x1*x2*x3, kappa = 3, ell = 2 in n = 3: the shifts of 1 span everything
    rep = codimension(parse_polynomial("x1*x2*x3"), SpdpParams(3, 2))
    assert rep.codim == 0


def test_report_json_roundtrip():
    rep = codimension(toy_example(), SpdpParams(1, 1))
    back = RankReport.from_json(rep.to_json())
    assert back == rep
    assert set(rep.to_dict()) == {"gamma", "ambient_dim", "codim", "rows", "cols", "field"}


def test_spdp_rank_shortcut():
    assert spdp_rank(toy_example(), 1, 1) == 6


def test_standard_mode_diagonal():
    p = parse_polynomial("x1^4 + x2^4", mode=STANDARD)
    # derivatives: 4x1^3, 4x2^3 -> two independent rows
    assert spdp_rank(p, 1, 0) == 2
    # second derivatives in the standard ring include repeated indices
    assert spdp_rank(p, 2, 0) == 2


@settings(max_examples=60, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 2))
def test_rank_matches_independent_oracle(p, kappa, ell):
    got = codimension(p, SpdpParams(kappa, ell))
    assert (got.gamma, got.ambient_dim) == ml_spdp_rank(as_oracle(p), p.n, kappa, ell)


@settings(max_examples=40, deadline=None)
@given(ml_polys(max_n=5), st.integers(0, 2), st.integers(0, 2))
def test_rank_is_span_dimension(p, kappa, ell):
    M = build_matrix(p, SpdpParams(kappa, ell))
    assert rank(M).gamma == gram_schmidt_dimension(M.to_dense())


# -----------------------------
# Structural properties
# -----------------------------

@settings(max_examples=60, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 2))
def test_ell_monotone(p, kappa, ell):
    assert spdp_rank(p, kappa, ell) <= spdp_rank(p, kappa, ell + 1)


@settings(max_examples=40, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 1))
def test_cumulative_kappa_monotone(p, kappa, ell):
    assert spdp_rank(p, kappa, ell, CUMULATIVE) <= spdp_rank(p, kappa + 1, ell, CUMULATIVE)


@settings(max_examples=60, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 2), st.data())
def test_submatrix_monotone(p, kappa, ell, data):
    M = build_matrix(p, SpdpParams(kappa, ell))
    rows = data.draw(st.lists(st.integers(0, M.nrows - 1), unique=True)) if M.nrows else []
    cols = data.draw(st.lists(st.integers(0, M.ncols - 1), unique=True))
    assert rank(M.submatrix(rows, cols)).gamma <= rank(M).gamma


@settings(max_examples=60, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 2), st.randoms(use_true_random=False))
def test_permutation_invariance(p, kappa, ell, rnd):
    perm = list(range(p.n))
    rnd.shuffle(perm)
    a = codimension(p, SpdpParams(kappa, ell))
    b = codimension(p.permute(perm), SpdpParams(kappa, ell))
    assert (a.gamma, a.codim) == (b.gamma, b.codim)


@settings(max_examples=60, deadline=None)
@given(ml_polys(), st.integers(0, 2), st.integers(0, 2))
def test_gfp_rank_never_exceeds_rational(p, kappa, ell):
    M = build_matrix(p, SpdpParams(kappa, ell))
    q = rank(M).gamma
    assert rank(M, PrimeField(5)).gamma <= q
    assert rank(M, GFP).gamma == q


# -----------------------------
# Blocked restriction
# -----------------------------

def test_singleton_blocks_all_rows_is_identity():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    Mb = blocked_matrix(M, BlockPartition.singletons(3), keep_all)
    assert Mb.rows == M.rows and Mb.labels == M.labels and Mb.columns == M.columns


def test_singleton_blocks_default_filter_kappa_one():
    # |S| = 1 always touches one block, so nothing is dropped
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    assert blocked_matrix(M, BlockPartition.singletons(3)).rows == M.rows


def test_keep_none_is_empty():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    Mb = blocked_matrix(M, BlockPartition.singletons(3), keep_none)
    assert Mb.nrows == 0 and rank(Mb).gamma == 0


def test_toy_blocks_monotone():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    B = BlockPartition(3, ((0, 1), (2,)))
    assert rank(blocked_matrix(M, B)).gamma <= 6


def test_block_local_filter_drops_cross_block_supports():
    p = parse_polynomial("x1*x2*x3*x4")
    M = build_matrix(p, SpdpParams(2, 0))
    Mb = blocked_matrix(M, BlockPartition.contiguous(4, 2))
    assert sorted(S for S, _ in Mb.labels) == [(0, 1), (2, 3)]
    assert rank(Mb).gamma == 2 <= rank(M).gamma == 6


def test_column_predicate():
    M = build_matrix(toy_example(), SpdpParams(1, 1))
    Mb = blocked_matrix(M, BlockPartition.singletons(3), keep_all, lambda k: bin(k).count("1") == 1)
    assert Mb.ncols == 3


def test_partition_validation():
    with pytest.raises(ValueError):
        BlockPartition(3, ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        BlockPartition(3, ((0,), (1,)))
    assert BlockPartition.contiguous(5, 2).max_block_size == 2


# -----------------------------
# Triplet format
# -----------------------------

def test_triplet_roundtrip():
    p = parse_polynomial("1/2*x1*x2 - 3*x2*x3")
    M = build_matrix(p, SpdpParams(1, 1))
    text = write_triplets(M)
    assert text.splitlines()[0] == f"spdp {M.nrows} {M.ncols} QQ"
    nrows, ncols, field, rows = read_triplets(text)
    assert (nrows, ncols) == M.shape and rows == M.rows
    assert any(v == Fraction(1, 2) for r in rows for v in r.values())


def test_triplet_bad_header():
    with pytest.raises(ValueError):
        read_triplets("matrix 1 1 QQ\n0 0 1\n")


def test_matrix_is_deterministic():
    p = parse_polynomial("x1*x2 + x2*x3*x4 - x1*x4", n=5)
    a = write_triplets(build_matrix(p, SpdpParams(2, 1)))
    b = write_triplets(build_matrix(p, SpdpParams(2, 1)))
    assert a == b
