"""Arithmetic in GF(q) for prime powers q <= 16.

Elements are plain integers in ``range(q)``: the element
``c_0 + c_1 x + ... + c_{e-1} x^{e-1}`` of GF(p)[x]/(m(x)) is encoded as
``code = sum(c_i * p**i)``. Codes 0 and 1 are the additive and multiplicative
identities. This integer is also the wire encoding used in family files.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisionByZero, NotPrimePower, UnsupportedOrder

MAX_ORDER = 16

# Fixed irreducible moduli, lowest degree coefficient first.
MODULI = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}

Table = tuple[tuple[int, ...], ...]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` and p prime, or None."""
    if q < 2:
        return None
    p = next((d for d in range(2, int(q**0.5) + 1) if q % d == 0), q)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm] + [0] * max(0, dm - len(a))
    return a


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(modulus), divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    q: int
    p: int
    e: int
    modulus: tuple[int, ...]
    add: Table = field(repr=False, compare=False)
    sub: Table = field(repr=False, compare=False)
    mul: Table = field(repr=False, compare=False)
    neg: tuple[int, ...] = field(repr=False, compare=False)
    inv: tuple[int, ...] = field(repr=False, compare=False)

    def __hash__(self) -> int:
        return hash(self.q)

    def __reduce__(self):
        # rebuild through the cache so worker processes share one instance
        return (field_make, (self.q,))

    @property
    def elements(self) -> range:
        return range(self.q)

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def from_digits(self, coeffs) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))


@lru_cache(maxsize=None)
def field_make(q: int) -> FieldSpec:
    """Build GF(q) with the fixed modulus table.

    The result is cached, so every call with the same q returns the same object.
    """
    pe = prime_power(q) if isinstance(q, int) else None
    if pe is None:
        raise NotPrimePower(f"q={q!r} is not a prime power")
    if q > MAX_ORDER:
        raise UnsupportedOrder(f"q={q} exceeds the supported maximum {MAX_ORDER}")
    p, e = pe
    # e == 1 uses the monic linear modulus x, so arithmetic is plain mod-p
    modulus = (0, 1) if e == 1 else MODULI[q]
    assert is_irreducible(modulus, p)

    def enc(coeffs):
        return sum(c * p**i for i, c in enumerate(coeffs))

    digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]
    add = tuple(
        tuple(enc([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q))
        for a in range(q)
    )
    neg = tuple(enc([(-x) % p for x in digits[a]]) for a in range(q))
    sub = tuple(tuple(add[a][neg[b]] for b in range(q)) for a in range(q))
    if e == 1:
        mul = tuple(tuple(a * b % p for b in range(q)) for a in range(q))
    else:
        rows = []
        for a in range(q):
            row = []
            for b in range(q):
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
                row.append(enc(_poly_mod(prod, modulus, p)))
            rows.append(tuple(row))
        mul = tuple(rows)
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
    return FieldSpec(q, p, e, tuple(modulus), add, sub, mul, neg, tuple(inv))


def field_arith(spec: FieldSpec, op: str, a: int, b: int) -> int:
    if op == "add":
        return spec.add[a][b]
    if op == "sub":
        return spec.sub[a][b]
    if op == "mul":
        return spec.mul[a][b]
    if op == "div":
        if b == 0:
            raise DivisionByZero("division by the zero element")
        return spec.mul[a][spec.inv[b]]
    raise ValueError(f"unknown field operation {op!r}")
