"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's arithmetic: field products are done on
coefficient lists, spans are enumerated vector by vector, and Gaussian
binomials come from the q-Pascal recurrence.
"""

from functools import lru_cache
from itertools import product

MODULI = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (1, 0, 1), 16: (1, 1, 0, 0, 1)}
PRIMES = {2: 2, 3: 3, 4: 2, 5: 5, 7: 7, 8: 2, 9: 3, 11: 11, 13: 13, 16: 2}


def _digits(a, p, e):
    return [(a // p**i) % p for i in range(e)]


def _encode(c, p):
    return sum(x * p**i for i, x in enumerate(c))


def poly_mul(q, a, b):
    """Product of two element codes of GF(q) by schoolbook polynomial multiplication."""
    p = PRIMES[q]
    if p == q:
        return a * b % q
    m = MODULI[q]
    e = len(m) - 1
    da, db = _digits(a, p, e), _digits(b, p, e)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for i, mi in enumerate(m):
                prod[d - e + i] = (prod[d - e + i] - c * mi) % p
    return _encode(prod[:e], p)


def poly_add(q, a, b):
    p = PRIMES[q]
    if p == q:
        return (a + b) % q
    e = len(MODULI[q]) - 1
    return _encode([(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p)


def span(q, rows, width):
    """Every vector of the row space, as a frozenset of tuples."""
    out = {tuple([0] * width)}
    for coeffs in product(range(q), repeat=len(rows)):
        v = [0] * width
        for c, r in zip(coeffs, rows):
            v = [poly_add(q, x, poly_mul(q, c, y)) for x, y in zip(v, r)]
        out.add(tuple(v))
    return frozenset(out)


def dim_of(q, vectors):
    """Projective dimension from the number of vectors in a vector subspace."""
    size, d = len(vectors), -1
    while size > 1:
        size //= q
        d += 1
    return d


@lru_cache(maxsize=None)
def qbinom(n, k, q):
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return qbinom(n - 1, k - 1, q) + q**k * qbinom(n - 1, k, q)


def affine_points(q, vecs):
    """Vectors with first coordinate 1, i.e. the affine points of the span."""
    return {v for v in vecs if v[0] == 1}
