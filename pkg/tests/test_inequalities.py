import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from subspace_ekr import inequalities as I
from subspace_ekr.counting import Params
from subspace_ekr.errors import EmptyGrid, HypothesisViolation, ParseError, UnknownLemma

from reference import qbinom

P = Params


def th(m, q):
    return qbinom(m + 1, 1, q)


def test_every_lemma_has_hypothesis_and_default_grid():
    assert len(I.LEMMAS) == 18
    for lemma in I.LEMMAS:
        for p in I.grid_params(lemma, I.default_grid(lemma)):
            assert I.hypothesis_holds(lemma, p)


def test_small_cover_bound_by_hand():
    v = I.check_lemma("L47", P(2, 4, 2, 1))
    q, n, k, t = 2, 4, 2, 1
    lhs = 2 * qbinom(n - t - 1, k - t - 1, q) + (th(t + 1, q) * th(k - t, q) - th(t + 1, q) - 1) * th(k - t, q) * qbinom(n - t - 2, k - t - 2, q)
    rhs = qbinom(n - t - 1, k - t - 1, q) + th(t + 1, q) * (th(k - t, q) - 1) * th(k - t, q) * qbinom(n - t - 2, k - t - 2, q)
    assert (v.lhs, v.rhs, v.relation, v.holds) == (lhs, rhs, ">=", True)


@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 3), st.integers(0, 4), st.integers(3, 8))
def test_last_projective_sides_by_hand(q, t, dk, dn):
    k = 2 * t + 3 + dk
    n = 2 * k + t + dn
    x = 2
    p = P(q, n, k, t, x)
    v = I.check_lemma("LAATSTE_P", p)
    a = k - t
    rhs = th(t + x, q) * qbinom(n - t - x + 1, a - x + 1, q) + th(a, q) ** 2 * qbinom(n - t - 2, a - 2, q) + th(a - 1, q) * qbinom(n - t - 1, a - 1, q)
    assert v.rhs == rhs


def test_affine_equality_case():
    v = I.check_lemma("AVERSCHIL3", P(3, 6, 3, 1))
    assert v.lhs == v.rhs == 508 == 1 + 3 * 13 * 13
    names = {part.lemma: part for part in v.parts}
    assert names["AVERSCHIL3/equal_first"].holds and names["AVERSCHIL3/equal_second"].holds
    assert v.all_hold


def test_projective_exceptional_tuple():
    v = I.check_lemma("PVERSCHIL3", P(3, 8, 4, 1))
    assert v.holds
    w1 = next(part for part in v.parts if part.lemma.endswith("w1_negative"))
    assert w1.lhs < 0 and w1.holds
    assert v.all_hold


def test_affine_t2_n9_difference():
    q = 3
    v = I.check_lemma("AVERSCHIL3", P(q, 9, 5, 2))
    part = next(p for p in v.parts if p.lemma.endswith("difference"))
    assert part.lhs == q**9 + 2 * q**8 + 3 * q**7 + 2 * q**6 + q**5 == 41067


@pytest.mark.parametrize("kind,q,n,t", [("PG", 2, 8, 1), ("PG", 3, 11, 2), ("AG", 3, 6, 1), ("AG", 3, 9, 2), ("AG", 5, 12, 3)])
def test_decompositions(kind, q, n, t):
    vs = I.decomposition_identities(kind, P(q, n, 0, t))
    assert len(vs) == 3 and all(v.holds for v in vs)


def test_decomposition_equality_case_is_zero():
    vs = I.decomposition_identities("AG", P(3, 6, 0, 1))
    assert vs[-1].lhs == vs[-1].rhs == 0
    with pytest.raises(HypothesisViolation):
        I.decomposition_identities("PG", P(3, 5, 0, 1))


def test_errors():
    with pytest.raises(UnknownLemma):
        I.check_lemma("NOPE", P(2, 4, 2, 1))
    with pytest.raises(HypothesisViolation):
        I.check_lemma("PVERSCHIL1", P(2, 12, 5, 1))
    with pytest.raises(EmptyGrid):
        I.run_grid("PVERSCHIL1", "q=2..2,t=1..1,k=5..5,n=10..12")
    for bad in ("q=2..3,t", "z=1..2", "q=2..3,q=3..4", "q=2..3,k=t..4", "q=1..2,n=3..4,k=1,t=0..0+", ""):
        with pytest.raises(ParseError):
            I.grid_params("L47", bad)


def test_grid_expressions():
    envs = I.expand_grid("t=1..2,k=t+1..2t+1,n=2k-t..2*k")
    assert {"t": 2, "k": 5, "n": 10} in envs
    assert all(e["t"] + 1 <= e["k"] <= 2 * e["t"] + 1 for e in envs)
    assert I.expand_grid("q=3") == [{"q": 3}]


def test_grid_from_example():
    rep = I.run_grid("L47", "q=2..3,t=1..2,k=t+1..t+4,n=2k-t+1..2k+6")
    assert rep.ok and rep.passed == len(rep.verdicts) > 0
    keys = [I.param_key(v.params) for v in rep.verdicts]
    assert keys == sorted(keys)


def test_psi_bound_grid_from_example():
    rep = I.run_grid("LELIJK_P", "q=4..5,t=1..2,k=t+2..t+4,n=2k+t+3..2k+t+6,x=2..4")
    assert rep.ok and {v.params.x for v in rep.verdicts} == {2, 3, 4}


def test_threads_do_not_change_results():
    a = I.run_grid("LELIJK_A", threads=1)
    b = I.run_grid("LELIJK_A", threads=4)
    assert I.to_csv(a.verdicts) == I.to_csv(b.verdicts)


def test_csv_and_json_agree():
    rep = I.run_grid("PVERSCHIL3", "q=3..4,t=1..2,k=2t+2..2t+2,n=2k-t+1..2k+3")
    rows_csv = list(csv.DictReader(io.StringIO(I.to_csv(rep.verdicts))))
    rows_json = json.loads(I.to_json(rep.verdicts))["rows"]
    assert rows_csv == rows_json
    assert list(rows_csv[0]) == list(I.COLUMNS)


# Two statements fail on tuples their printed hypotheses admit; these pin
# the counterexamples so any change in behaviour is noticed.


@pytest.mark.parametrize("k,t", [(4, 1), (5, 2), (5, 1), (6, 3), (6, 2)])
@pytest.mark.parametrize("q", [2, 3])
def test_affine_small_cover_bound_fails_at_n_equal_2k_minus_t(q, k, t):
    v = I.check_lemma("L47B", P(q, 2 * k - t, k, t))
    assert not v.holds and v.lhs < v.rhs
    assert I.check_lemma("L47B", P(q, 2 * k - t + 1, k, t)).holds


def test_affine_small_cover_bound_holds_at_boundary_for_short_gap():
    for q in (2, 3, 4):
        for t in (0, 1, 2):
            assert I.check_lemma("L47B", P(q, t + 4, t + 2, t)).holds


@pytest.mark.parametrize("n,k,t", [(14, 5, 1), (15, 5, 1), (19, 7, 2)])
def test_last_projective_bound_fails_over_gf2(n, k, t):
    v = I.check_lemma("LAATSTE_P", P(2, n, k, t, 2))
    assert not v.holds and v.lhs <= v.rhs
    assert I.check_lemma("LAATSTE_P", P(3, n, k, t, 2)).holds


def test_only_known_counterexamples_on_default_grids():
    bad = {}
    for lemma in I.LEMMAS:
        bad[lemma] = [v.params for v in I.run_grid(lemma).failures]
    assert {k for k, v in bad.items() if v} == {"L47B", "LAATSTE_P"}
    assert all(p.n == 2 * p.k - p.t for p in bad["L47B"])
    assert [(p.q, p.n, p.k, p.t, p.x) for p in bad["LAATSTE_P"]] == [(2, 14, 5, 1, 2), (2, 15, 5, 1, 2), (2, 19, 7, 2, 2)]
