"""Exact counts: Gaussian binomials, point counts and the family size formulas.

Everything here is integer (or exact rational) arithmetic. The Gaussian
binomial is extended by zero outside 0 <= k <= n, which lets the size
formulas be evaluated at k = t + 1 without special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DivisibilityViolation,
    FormUnavailable,
    HypothesisViolation,
    InvalidFieldOrder,
    InvariantViolation,
)
from .gf import prime_power

EXAMPLES = ("PENCIL", "P1", "P2", "A1", "A2")
FORMS = ("closed", "sum", "refined")


@dataclass(frozen=True)
class Params:
    q: int
    n: int
    k: int
    t: int
    x: int | None = None
    j: int | None = None

    def as_tuple(self) -> tuple:
        return (self.q, self.n, self.k, self.t, self.x, self.j)


def _check_q(q: int) -> None:
    if not isinstance(q, int) or prime_power(q) is None:
        raise InvalidFieldOrder(f"q={q!r} is not a prime power")


@lru_cache(maxsize=None)
def _gauss(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gaussian(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n; 0 when k < 0 or k > n."""
    _check_q(q)
    return _gauss(n, k, q)


def theta(n: int, q: int) -> int:
    """Number of points of PG(n, q)."""
    _check_q(q)
    return _gauss(n + 1, 1, q)


def exact_div(a: int, b: int) -> int:
    if b == 0 or a % b:
        raise DivisibilityViolation(f"{a} is not divisible by {b}")
    return a // b


def as_int(value: Fraction) -> int:
    if value.denominator != 1:
        raise DivisibilityViolation(f"expected an integer, got {value}")
    return value.numerator


def count_disjoint(n: int, m: int, j: int, q: int) -> int:
    """Number of j-spaces of PG(n, q) disjoint from a fixed m-space."""
    _check_q(q)
    if m < 0 or j < 0:
        raise HypothesisViolation(f"need m >= 0 and j >= 0, got m={m}, j={j}")
    return q ** ((m + 1) * (j + 1)) * _gauss(n - m, j + 1, q)


def count_affine_subspaces(m: int, k: int, q: int) -> int:
    """Number of k-spaces of PG(m, q) not contained in a fixed hyperplane."""
    _check_q(q)
    return _gauss(m + 1, k + 1, q) - _gauss(m, k + 1, q)


def size_pencil(p: Params) -> int:
    _check_q(p.q)
    if not (0 <= p.t <= p.k <= p.n):
        raise HypothesisViolation(f"need 0 <= t <= k <= n, got t={p.t}, k={p.k}, n={p.n}")
    return _gauss(p.n - p.t, p.k - p.t, p.q)


# -- size formulas of the two projective and two affine examples -------------


def _p1_closed(q, n, k, t, top):
    G = lambda a, b: _gauss(a, b, q)
    return G(top + 1, 1) - G(k - t + 1, 1) + G(n - t, k - t) - q ** ((k - t + 1) * (k - t)) * G(n - k - 1, k - t)


def _p1_sum(q, n, k, t, top):
    G = lambda a, b: _gauss(a, b, q)
    total = G(top + 1, 1)
    for j in range(k - t - 1):
        total += G(k - t + 1, j + 1) * q ** ((k - t - j) * (k - t - j - 1)) * G(n - k - 1, k - t - j - 1)
    return total


def _p2_two_term(q, n, k, t, s):
    G = lambda a, b: _gauss(a, b, q)
    return G(n - t - 2, k - t - 2) + G(s + 1, 1) * (G(n - t - 1, k - t - 1) - G(n - t - 2, k - t - 2))


def _p2_factored(q, n, k, t, s):
    G = lambda a, b: _gauss(a, b, q)
    den = q ** (k - t - 1) - 1
    num = G(n - t - 2, k - t - 2) * (den + G(s + 1, 1) * q ** (k - t - 1) * (q ** (n - k) - 1))
    return exact_div(num, den)


def _p2_refined(q, n, t):
    """Sum over the dimension of the meet with a fixed subspace, at k = 2t + 2."""
    G = lambda a, b: _gauss(a, b, q)
    th = G(t + 3, 1)
    total = G(n - t - 2, t)
    for i in range(-1, t + 1):
        d = t - i
        total += th * G(t + 1, i + 1) * (q ** (d * d) * G(n - 2 * t - 2, d) - q ** (d * (d - 1)) * G(n - 2 * t - 3, d - 1))
    return total


def _p2_refined_j(q, n, t):
    G = lambda a, b: _gauss(a, b, q)
    th = G(t + 3, 1)
    total = Fraction(G(n - t - 2, t) + th)
    for j in range(t + 1):
        e = t - j + 1
        total += Fraction(
            th * G(t + 1, j) * q ** (e * (e - 1)) * G(n - 2 * t - 3, t - j) * (q ** (n - t - j - 1) - 2 * q**e + 1),
            q**e - 1,
        )
    return as_int(total)


def _p1_refined(q, n, t):
    G = lambda a, b: _gauss(a, b, q)
    total = G(2 * t + 4, 1)
    for j in range(t + 1):
        total += G(t + 3, j + 1) * q ** ((t + 2 - j) * (t + 1 - j)) * G(n - 2 * t - 3, t + 1 - j)
    return total


def _a2_refined(q, n, t):
    G = lambda a, b: _gauss(a, b, q)
    th = G(t + 2, 1)
    total = G(n - t - 2, t - 1)
    for i in range(-1, t):
        d = t - i - 1
        total += th * G(t, i + 1) * (q ** (d * d) * G(n - 2 * t - 1, d) - q ** (d * (d - 1)) * G(n - 2 * t - 2, d - 1))
    return total


def _a2_refined_j(q, n, t):
    G = lambda a, b: _gauss(a, b, q)
    th = G(t + 2, 1)
    total = Fraction(G(n - t - 2, t - 1) + th)
    for j in range(t):
        e = t - j
        total += Fraction(
            th * G(t, j) * q ** (e * (e - 1)) * G(n - 2 * t - 2, t - j - 1) * (q ** (n - t - j - 1) - 2 * q**e + 1),
            q**e - 1,
        )
    return as_int(total)


def _a1_refined(q, n, t):
    G = lambda a, b: _gauss(a, b, q)
    total = G(2 * t + 2, 1)
    for j in range(t):
        total += G(t + 2, j + 1) * q ** ((t + 1 - j) * (t - j)) * G(n - 2 * t - 2, t - j)
    return total


def _check_example_params(p: Params) -> None:
    _check_q(p.q)
    if not (0 <= p.t < p.k):
        raise HypothesisViolation(f"need 0 <= t < k, got t={p.t}, k={p.k}")
    if not p.n > 2 * p.k - p.t:
        raise HypothesisViolation(f"need n > 2k - t, got n={p.n}, k={p.k}, t={p.t}")


def size_example(example_id: str, form: str, p: Params) -> int:
    """Size of one of the example families, evaluated from the named formula.

    ``closed`` and ``sum`` exist for every example; ``refined`` is the
    decomposition by meet dimension, available only at k = 2t + 2 for the
    projective examples and k = 2t + 1 for the affine ones.
    """
    if example_id not in EXAMPLES:
        raise FormUnavailable(f"unknown example {example_id!r}")
    if form not in FORMS:
        raise FormUnavailable(f"unknown form {form!r}")
    if example_id == "PENCIL":
        if form != "closed":
            raise FormUnavailable("the pencil size has only a closed form")
        return size_pencil(p)
    _check_example_params(p)
    q, n, k, t = p.q, p.n, p.k, p.t
    projective = example_id[0] == "P"
    if form == "refined":
        if projective and k != 2 * t + 2:
            raise FormUnavailable(f"the refined projective forms need k = 2t + 2, got k={k}, t={t}")
        if not projective and k != 2 * t + 1:
            raise FormUnavailable(f"the refined affine forms need k = 2t + 1, got k={k}, t={t}")
        if example_id == "P1":
            return _p1_refined(q, n, t)
        if example_id == "A1":
            return _a1_refined(q, n, t)
        refined, by_j = (_p2_refined, _p2_refined_j) if projective else (_a2_refined, _a2_refined_j)
        value = refined(q, n, t)
        if by_j(q, n, t) != value:
            raise InvariantViolation(f"the two refined {example_id} sums disagree at {p}")
        return value
    if example_id in ("P1", "A1"):
        top = k + 1 if projective else k
        fn = _p1_closed if form == "closed" else _p1_sum
        return fn(q, n, k, t, top)
    s = t + 2 if projective else t + 1
    value = _p2_two_term(q, n, k, t, s)
    if form == "closed" and k > t + 1:
        factored = _p2_factored(q, n, k, t, s)
        if factored != value:
            raise InvariantViolation(f"factored and expanded {example_id} sizes disagree at {p}")
    return value


@dataclass(frozen=True)
class Threshold:
    value: int
    branch: str
    tie: bool
    sizes: dict


def hm_threshold(space_kind: str, p: Params) -> Threshold:
    """Larger of the two non-pencil example sizes, with the branch that attains it.

    On a tie the second example is reported, as it is the one that is
    maximal for every choice of parameters.
    """
    kind = space_kind.upper()
    _check_q(p.q)
    if not (p.n > 2 * p.k - p.t and p.k > p.t + 1 and p.q >= 3 and p.t >= 0):
        raise HypothesisViolation(f"need n > 2k - t, k > t + 1, q >= 3, got {p}")
    first, second = ("P1", "P2") if kind == "PG" else ("A1", "A2")
    a = size_example(first, "closed", p)
    b = size_example(second, "closed", p)
    branch = first if a > b else second
    return Threshold(max(a, b), branch, a == b, {first: a, second: b})


def bound_psi_families(space_kind: str, p: Params) -> int:
    """Upper bound on a family whose smallest cover has dimension t + x."""
    kind = space_kind.upper()
    _check_q(p.q)
    q, n, k, t, x = p.q, p.n, p.k, p.t, p.x
    if x is None or not (x >= 2 and k > t + 1 and n > 2 * k - t and t >= 0):
        raise HypothesisViolation(f"need x >= 2, k > t + 1, n > 2k - t, got {p}")
    th = _gauss(k - t + 1, 1, q)
    if kind == "PG":
        return th**x * _gauss(n - t - x, k - t - x, q) * _gauss(t + x + 1, t + 1, q)
    return q**x * _gauss(t + x, x, q) * th**x * _gauss(n - t - x, k - t - x, q)


def bound_small_cover(space_kind: str, p: Params) -> int:
    """Upper bound on a family with cover dimension t + 1 and at most two covers."""
    kind = space_kind.upper()
    _check_q(p.q)
    q, n, k, t = p.q, p.n, p.k, p.t
    if not (n > 2 * k - t and k > t >= 0):
        raise HypothesisViolation(f"need n > 2k - t and k > t, got {p}")
    th1 = _gauss(t + 2, 1, q)
    thk = _gauss(k - t + 1, 1, q)
    last = 1 if kind == "PG" else thk
    return 2 * _gauss(n - t - 1, k - t - 1, q) + (th1 * thk - th1 - last) * thk * _gauss(n - t - 2, k - t - 2, q)
