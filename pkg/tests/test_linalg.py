import pytest
from hypothesis import given, settings, strategies as st

from subspace_ekr.errors import AmbientMismatch, DimensionMismatch
from subspace_ekr.gf import field_make
from subspace_ekr.linalg import (
    contains,
    empty,
    join,
    join_all,
    join_rank,
    meet,
    meet_all,
    meet_dim,
    rank_of,
    rref_canonicalize,
    span_units,
    whole,
)

from reference import dim_of, poly_add, span


@st.composite
def row_lists(draw, q=None, n=None, max_rows=4):
    q = q or draw(st.sampled_from([2, 3, 4]))
    n = n if n is not None else draw(st.integers(1, 3))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n + 1, max_size=n + 1), max_size=max_rows))
    return q, n, rows


@st.composite
def subspace_pairs(draw):
    q = draw(st.sampled_from([2, 3, 4]))
    n = draw(st.integers(1, 3))
    _, _, a = draw(row_lists(q, n))
    _, _, b = draw(row_lists(q, n))
    return q, n, a, b


@given(row_lists())
def test_canonical_form_spans_the_same_space(args):
    q, n, rows = args
    U = rref_canonicalize(field_make(q), rows, n)
    assert span(q, U.basis, n + 1) == span(q, rows, n + 1)
    assert U.dim == dim_of(q, span(q, rows, n + 1))


@given(row_lists())
def test_basis_is_reduced_echelon(args):
    q, n, rows = args
    U = rref_canonicalize(field_make(q), rows, n)
    piv = U.pivots
    assert list(piv) == sorted(set(piv))
    for i, p in enumerate(piv):
        assert U.basis[i][p] == 1
        assert all(x == 0 for x in U.basis[i][:p])
        assert all(U.basis[j][p] == 0 for j in range(len(piv)) if j != i)


@settings(max_examples=60)
@given(subspace_pairs())
def test_canonical_forms_equal_iff_spans_equal(args):
    q, n, a, b = args
    f = field_make(q)
    same = span(q, a, n + 1) == span(q, b, n + 1)
    assert (rref_canonicalize(f, a, n) == rref_canonicalize(f, b, n)) == same


@settings(max_examples=60)
@given(subspace_pairs())
def test_meet_and_join_against_vector_sets(args):
    q, n, a, b = args
    f = field_make(q)
    U, V = rref_canonicalize(f, a, n), rref_canonicalize(f, b, n)
    su, sv = span(q, a, n + 1), span(q, b, n + 1)
    inter = su & sv
    assert meet_dim(U, V) == dim_of(q, inter)
    M = meet(U, V)
    assert span(q, M.basis, n + 1) == inter
    J = join(U, V)
    sums = {tuple(poly_add(q, x, y) for x, y in zip(u, v)) for u in su for v in sv}
    assert span(q, J.basis, n + 1) == sums
    assert join_rank(U, V) == J.rank
    assert contains(U, V) == (sv <= su)


@given(subspace_pairs())
def test_grassmann_identity(args):
    q, n, a, b = args
    f = field_make(q)
    U, V = rref_canonicalize(f, a, n), rref_canonicalize(f, b, n)
    assert meet_dim(U, V) + join(U, V).dim == U.dim + V.dim


def test_large_field_meet():
    f = field_make(16)
    U = rref_canonicalize(f, [[1, 2, 3, 4], [0, 1, 5, 7]])
    V = rref_canonicalize(f, [[1, 2, 3, 4], [0, 0, 1, 9]])
    assert meet_dim(U, V) == 0
    assert meet(U, V) == rref_canonicalize(f, [[1, 2, 3, 4]])


def test_many_way_join_and_meet():
    f = field_make(3)
    lines = [span_units(f, 3, ix) for ix in ((0, 1), (1, 2), (0, 2))]
    assert join_all(lines) == span_units(f, 3, (0, 1, 2))
    assert meet_all(lines).dim == -1
    assert meet_all(lines[:2]) == span_units(f, 3, (1,))


def test_empty_and_whole():
    f = field_make(2)
    assert empty(f, 3).dim == -1
    assert whole(f, 3).dim == 3
    assert contains(whole(f, 3), span_units(f, 3, (2,)))
    assert contains(span_units(f, 3, (2,)), empty(f, 3))
    assert rank_of(f, 3, [[1, 0, 0, 0], [1, 0, 0, 0]]) == 1


def test_errors():
    f = field_make(3)
    with pytest.raises(DimensionMismatch):
        rref_canonicalize(f, [[1, 0], [1, 0, 0]])
    with pytest.raises(DimensionMismatch):
        rref_canonicalize(f, [])
    with pytest.raises(ValueError):
        rref_canonicalize(f, [[1, 5, 0]])
    with pytest.raises(AmbientMismatch):
        meet(span_units(f, 2, (0,)), span_units(f, 3, (0,)))
