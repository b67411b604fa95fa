"""Canonical subspaces of PG(n, q) and the lattice operations on them.

A projective k-space is stored as the reduced row echelon basis of the
corresponding (k+1)-dimensional vector subspace of GF(q)^(n+1). Two
``Subspace`` values describe the same point set exactly when their basis
tuples are equal, so they can be hashed, deduplicated and sorted directly.

Dimensions are projective throughout: a point has dimension 0 and the empty
subspace has dimension -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import AmbientMismatch, DimensionMismatch
from .gf import FieldSpec

Row = tuple[int, ...]
Matrix = tuple[Row, ...]


def _rref(field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    sub, mul, inv = field.sub, field.mul, field.inv
    m = [list(r) for r in rows]
    top = 0
    for c in range(ncols):
        if top == len(m):
            break
        sel = next((i for i in range(top, len(m)) if m[i][c]), None)
        if sel is None:
            continue
        m[top], m[sel] = m[sel], m[top]
        piv = m[top]
        if piv[c] != 1:
            scale = mul[inv[piv[c]]]
            piv = m[top] = [scale[x] for x in piv]
        for i in range(len(m)):
            f = m[i][c]
            if i != top and f:
                mf = mul[f]
                m[i] = [sub[a][mf[b]] for a, b in zip(m[i], piv)]
        top += 1
    return tuple(tuple(r) for r in m[:top])


def _rank(field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> int:
    sub, mul, inv = field.sub, field.mul, field.inv
    m = [list(r) for r in rows]
    top = 0
    for c in range(ncols):
        if top == len(m):
            break
        sel = next((i for i in range(top, len(m)) if m[i][c]), None)
        if sel is None:
            continue
        m[top], m[sel] = m[sel], m[top]
        piv = m[top]
        ip = inv[piv[c]]
        for i in range(top + 1, len(m)):
            f = m[i][c]
            if f:
                mf = mul[mul[f][ip]]
                m[i] = [sub[a][mf[b]] for a, b in zip(m[i], piv)]
        top += 1
    return top


def _rank_packed(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of bit-packed row vectors."""
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            b = pivots.get(h)
            if b is None:
                pivots[h] = v
                break
            v ^= b
    return len(pivots)


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    n: int
    basis: Matrix

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(c for c, x in enumerate(r) if x) for r in self.basis)

    @cached_property
    def packed(self) -> tuple[int, ...]:
        # GF(2) only: column c maps to bit n - c, so leading columns are high bits
        return tuple(int("".join(map(str, r)), 2) for r in self.basis)

    @property
    def is_affine(self) -> bool:
        """True when the subspace is not contained in the hyperplane x0 = 0."""
        return bool(self.basis) and self.basis[0][0] != 0

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self) -> str:
        rows = ";".join("".join(map(str, r)) if self.q <= 10 else ",".join(map(str, r)) for r in self.basis)
        return f"Subspace(q={self.q}, n={self.n}, dim={self.dim}, [{rows}])"

    def __lt__(self, other: "Subspace") -> bool:
        return self.basis < other.basis


def rref_canonicalize(field: FieldSpec, rows: Sequence[Sequence[int]], n: int | None = None) -> Subspace:
    """Canonical subspace spanned by ``rows``; zero and dependent rows are dropped.

    ``n`` is the projective ambient dimension. It may be omitted when ``rows``
    is nonempty, in which case it is read off the row length.
    """
    rows = [tuple(r) for r in rows]
    if n is None:
        if not rows:
            raise DimensionMismatch("ambient dimension is needed for an empty row list")
        n = len(rows[0]) - 1
    for r in rows:
        if len(r) != n + 1:
            raise DimensionMismatch(f"row of length {len(r)} in an ambient space with {n + 1} coordinates")
        for x in r:
            if not (isinstance(x, int) and 0 <= x < field.q):
                raise ValueError(f"entry {x!r} is not an element code of GF({field.q})")
    return Subspace(field, n, _rref(field, rows, n + 1))


def empty(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, ())


def whole(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, tuple(unit_vector(n, i) for i in range(n + 1)))


def unit_vector(n: int, i: int) -> Row:
    return tuple(1 if j == i else 0 for j in range(n + 1))


def span_units(field: FieldSpec, n: int, indices: Iterable[int]) -> Subspace:
    """Span of the standard coordinate points e_i for the given indices."""
    return rref_canonicalize(field, [unit_vector(n, i) for i in indices], n)


def _check(U: Subspace, V: Subspace) -> None:
    if U.n != V.n or U.field != V.field:
        raise AmbientMismatch(f"subspaces of PG({U.n},{U.q}) and PG({V.n},{V.q})")


def rank_of(field: FieldSpec, n: int, rows: Sequence[Sequence[int]]) -> int:
    return _rank(field, rows, n + 1)


def join_rank(U: Subspace, V: Subspace) -> int:
    """Vector-space dimension of the span of U and V."""
    if U.field.q == 2:
        return _rank_packed(U.packed + V.packed)
    if not U.basis:
        return V.rank
    if not V.basis:
        return U.rank
    return _rank(U.field, U.basis + V.basis, U.n + 1)


def meet_dim(U: Subspace, V: Subspace) -> int:
    """Projective dimension of U ∩ V, computed from ranks only."""
    _check(U, V)
    return U.rank + V.rank - join_rank(U, V) - 1


def join(U: Subspace, V: Subspace) -> Subspace:
    _check(U, V)
    return Subspace(U.field, U.n, _rref(U.field, U.basis + V.basis, U.n + 1))


def join_all(subspaces: Iterable[Subspace]) -> Subspace:
    subspaces = list(subspaces)
    if not subspaces:
        raise ValueError("join of an empty collection")
    first = subspaces[0]
    rows = [r for S in subspaces for r in S.basis]
    for S in subspaces[1:]:
        _check(first, S)
    return Subspace(first.field, first.n, _rref(first.field, rows, first.n + 1))


def meet(U: Subspace, V: Subspace) -> Subspace:
    """U ∩ V via the Zassenhaus sum-intersection algorithm."""
    _check(U, V)
    f, w = U.field, U.n + 1
    if not U.basis or not V.basis:
        return empty(f, U.n)
    zero = (0,) * w
    stacked = [u + u for u in U.basis] + [v + zero for v in V.basis]
    reduced = _rref(f, stacked, 2 * w)
    inter = [r[w:] for r in reduced if not any(r[:w])]
    return Subspace(f, U.n, _rref(f, inter, w))


def meet_all(subspaces: Iterable[Subspace]) -> Subspace:
    it = iter(subspaces)
    acc = next(it)
    for S in it:
        acc = meet(acc, S)
        if not acc.basis:
            break
    return acc


def contains(U: Subspace, V: Subspace) -> bool:
    """True iff V ⊆ U."""
    _check(U, V)
    if V.rank > U.rank:
        return False
    return join_rank(U, V) == U.rank
