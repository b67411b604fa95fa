import itertools

import pytest
from hypothesis import given, settings, strategies as st

from subspace_ekr import geometry as geo
from subspace_ekr.errors import DimensionOutOfRange, NotAffine, NotInSpace
from subspace_ekr.linalg import contains, join_rank, meet_dim, rref_canonicalize, span_units

from reference import affine_points, qbinom, span


def points_of(q, U):
    return span(q, U.basis, U.n + 1)


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2), (4, 2)])
def test_enumeration_finds_every_span(q, n):
    # brute force: collect the spans of all tuples of vectors and compare
    space = geo.make_space("PG", n, q)
    vectors = list(itertools.product(range(q), repeat=n + 1))[1:]
    for d in range(n + 1):
        listed = list(geo.enumerate_subspaces(space, d))
        assert len(listed) == len(set(listed))
        seen = set()
        for rows in itertools.combinations(vectors, d + 1):
            U = rref_canonicalize(space.field, rows, n)
            if U.dim == d:
                seen.add(U)
        assert set(listed) == seen


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 3), (5, 2)])
def test_counts_match_q_pascal(q, n):
    space = geo.make_space("PG", n, q)
    aff = geo.make_space("AG", n, q)
    for d in range(-1, n + 1):
        assert sum(1 for _ in geo.enumerate_subspaces(space, d)) == qbinom(n + 1, d + 1, q)
        expected = q ** (n - d) * qbinom(n, d, q) if d >= 0 else 0
        assert sum(1 for _ in geo.enumerate_subspaces(aff, d)) == expected


def test_enumeration_order_is_stable():
    space = geo.make_space("PG", 3, 3)
    assert list(geo.enumerate_subspaces(space, 1)) == list(geo.enumerate_subspaces(space, 1))


@pytest.mark.parametrize("kind", ["PG", "AG"])
def test_through_within_disjoint(kind):
    q, n = 2, 4
    space = geo.make_space(kind, n, q)
    base = span_units(space.field, n, (0, 3))
    planes = list(geo.enumerate_subspaces(space, 2))
    through = list(geo.enumerate_through(space, base, 2))
    assert set(through) == {U for U in planes if contains(U, base)}
    assert len(through) == len(set(through))
    container = span_units(space.field, n, (0, 1, 2, 4))
    within = list(geo.enumerate_within(space, container, 1))
    assert set(within) == {L for L in geo.enumerate_subspaces(space, 1) if contains(container, L)}
    disjoint = set(geo.enumerate_disjoint_from(space, base, 1))
    assert disjoint == {L for L in geo.enumerate_subspaces(space, 1) if join_rank(L, base) == 4}


def test_affine_membership_and_trace():
    space = geo.make_space("AG", 3, 2)
    f = space.field
    H = geo.hyperplane_at_infinity(space)
    assert H.dim == 2 and not H.is_affine
    assert not geo.in_space(space, H)
    L = rref_canonicalize(f, [[1, 0, 0, 0], [0, 1, 1, 0]])
    assert geo.trace_at_infinity(space, L) == rref_canonicalize(f, [[0, 1, 1, 0]])
    with pytest.raises(NotAffine):
        geo.trace_at_infinity(space, H)


@settings(max_examples=80)
@given(st.sampled_from([2, 3]), st.data())
def test_affine_intersection_matches_point_sets(q, data):
    n = 3
    space = geo.make_space("AG", n, q)
    subs = list(geo.enumerate_subspaces(space, 1)) + list(geo.enumerate_subspaces(space, 2))
    U = data.draw(st.sampled_from(subs))
    V = data.draw(st.sampled_from(subs))
    common = affine_points(q, points_of(q, U)) & affine_points(q, points_of(q, V))
    d = geo.affine_intersection_dim(U, V)
    if not common:
        assert d == -1
    else:
        assert q**d == len(common)
    assert geo.intersection_dim(geo.make_space("PG", n, q), U, V) == meet_dim(U, V)


def test_errors():
    space = geo.make_space("PG", 3, 2)
    with pytest.raises(DimensionOutOfRange):
        list(geo.enumerate_subspaces(space, 4))
    with pytest.raises(DimensionOutOfRange):
        geo.make_space("PG", 0, 2)
    with pytest.raises(ValueError):
        geo.make_space("XG", 3, 2)
    aff = geo.make_space("AG", 3, 2)
    with pytest.raises(NotInSpace):
        list(geo.enumerate_through(aff, geo.hyperplane_at_infinity(aff), 3))
    with pytest.raises(NotInSpace):
        list(geo.enumerate_through(space, span_units(geo.make_space("PG", 4, 2).field, 4, (0,)), 2))
    assert str(aff) == "AG(3,2)"
