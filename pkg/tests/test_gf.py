import pytest
from hypothesis import given, strategies as st

from subspace_ekr.errors import DivisionByZero, NotPrimePower, UnsupportedOrder
from subspace_ekr.gf import MAX_ORDER, field_arith, field_make, is_irreducible, prime_power

from reference import poly_add, poly_mul

ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize("q", ORDERS)
def test_tables_match_polynomial_arithmetic(q):
    f = field_make(q)
    for a in range(q):
        for b in range(q):
            assert f.mul[a][b] == poly_mul(q, a, b)
            assert f.add[a][b] == poly_add(q, a, b)


@pytest.mark.parametrize("q", ORDERS)
def test_inverses_and_negatives(q):
    f = field_make(q)
    for a in range(1, q):
        assert f.mul[a][f.inv[a]] == 1
    for a in range(q):
        assert f.add[a][f.neg[a]] == 0
        assert f.sub[a][a] == 0


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_is_cyclic(q):
    f = field_make(q)
    orders = []
    for g in range(1, q):
        x, k = g, 1
        while x != 1:
            x, k = f.mul[x][g], k + 1
        orders.append(k)
    assert max(orders) == q - 1


@given(st.sampled_from(ORDERS), st.data())
def test_field_axioms(q, data):
    f = field_make(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]
    assert f.mul[f.mul[a][b]][c] == f.mul[a][f.mul[b][c]]
    assert f.add[f.add[a][b]][c] == f.add[a][f.add[b][c]]
    assert f.sub[f.add[a][b]][b] == a


def test_field_arith_ops():
    f = field_make(9)
    for a in range(9):
        for b in range(1, 9):
            assert field_arith(f, "mul", field_arith(f, "div", a, b), b) == a
    with pytest.raises(DivisionByZero):
        field_arith(f, "div", 3, 0)
    with pytest.raises(ValueError):
        field_arith(f, "pow", 1, 1)


def test_prime_power_detection():
    assert prime_power(8) == (2, 3)
    assert prime_power(49) == (7, 2)
    for q in (0, 1, 6, 12, 100):
        assert prime_power(q) is None


def test_rejected_orders():
    with pytest.raises(NotPrimePower):
        field_make(6)
    with pytest.raises(UnsupportedOrder):
        field_make(MAX_ORDER * 2)


def test_moduli_are_irreducible():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)  # x^2 + 1 = (x + 1)^2 over GF(2)
    assert is_irreducible((1, 0, 1), 3)


def test_field_is_cached_and_hashable():
    assert field_make(4) is field_make(4)
    assert len({field_make(4), field_make(4), field_make(2)}) == 2
