"""Projective and affine ambient spaces, and exhaustive subspace streams.

AG(n, q) lives inside PG(n, q) with the hyperplane at infinity fixed as
x0 = 0. A canonical basis describes an affine subspace exactly when its first
row has its pivot in column 0, which lets the affine streams skip every other
pivot pattern instead of filtering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AmbientMismatch, DimensionOutOfRange, NotAffine, NotInSpace
from .gf import FieldSpec, field_make
from .linalg import Subspace, _rref, join_rank, meet_dim, span_units

PG = "PG"
AG = "AG"


@dataclass(frozen=True)
class AmbientSpace:
    kind: str
    n: int
    field: FieldSpec

    def __post_init__(self):
        if self.kind not in (PG, AG):
            raise ValueError(f"space kind must be PG or AG, got {self.kind!r}")
        if self.n < 1:
            raise DimensionOutOfRange(f"ambient dimension must be at least 1, got {self.n}")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def affine(self) -> bool:
        return self.kind == AG

    def __str__(self) -> str:
        return f"{self.kind}({self.n},{self.q})"


def make_space(kind: str, n: int, q: int) -> AmbientSpace:
    return AmbientSpace(kind.upper(), n, field_make(q))


def hyperplane_at_infinity(space: AmbientSpace) -> Subspace:
    return span_units(space.field, space.n, range(1, space.n + 1))


def in_space(space: AmbientSpace, U: Subspace) -> bool:
    if U.n != space.n or U.field != space.field:
        return False
    return U.is_affine or not space.affine


def _check_member(space: AmbientSpace, U: Subspace) -> None:
    if U.n != space.n or U.field != space.field:
        raise NotInSpace(f"{U!r} does not live in {space}")
    if space.affine and not U.is_affine:
        raise NotInSpace(f"{U!r} lies inside the hyperplane at infinity of {space}")


def _echelon_stream(q: int, width: int, cols: Sequence[int], r: int, lead: int | None = None) -> Iterator[tuple]:
    """All r-row RREF matrices of length ``width`` supported on ``cols``.

    Pivot patterns run in lexicographic order and free entries in odometer
    order. With ``lead`` set, only patterns whose first pivot is ``lead``.
    """
    cols = list(cols)
    if r == 0:
        yield ()
        return
    for piv in itertools.combinations(cols, r):
        if lead is not None and piv[0] != lead:
            continue
        pivset = set(piv)
        slots = [(i, c) for i, p in enumerate(piv) for c in cols if c > p and c not in pivset]
        template = [[0] * width for _ in range(r)]
        for i, p in enumerate(piv):
            template[i][p] = 1
        for values in itertools.product(range(q), repeat=len(slots)):
            for (i, c), v in zip(slots, values):
                template[i][c] = v
            yield tuple(tuple(row) for row in template)


def _check_dim(space: AmbientSpace, d: int, low: int = -1) -> None:
    if not (low <= d <= space.n):
        raise DimensionOutOfRange(f"dimension {d} outside [{low}, {space.n}] in {space}")


def enumerate_subspaces(space: AmbientSpace, d: int) -> Iterator[Subspace]:
    """Every d-space of the ambient space (affine ones only for AG)."""
    _check_dim(space, d)
    f, n = space.field, space.n
    if space.affine and d < 0:
        return
    lead = 0 if space.affine else None
    for basis in _echelon_stream(f.q, n + 1, range(n + 1), d + 1, lead):
        yield Subspace(f, n, basis)


def enumerate_through(space: AmbientSpace, base: Subspace, d: int) -> Iterator[Subspace]:
    """Every d-space containing ``base``.

    The span of the coordinate points outside the pivot columns of ``base`` is
    a complement of it, so each d-space through ``base`` is ``base`` joined
    with exactly one subspace of that complement.
    """
    if base.basis:
        _check_member(space, base)
    elif base.n != space.n or base.field != space.field:
        raise NotInSpace(f"{base!r} does not live in {space}")
    _check_dim(space, d, base.dim)
    f, n = space.field, space.n
    free = [c for c in range(n + 1) if c not in set(base.pivots)]
    extra = d - base.dim
    if space.affine and not base.basis:
        yield from enumerate_subspaces(space, d)
        return
    for rows in _echelon_stream(f.q, n + 1, free, extra):
        yield _join_known_independent(f, n, base.basis, rows)


def _join_known_independent(f: FieldSpec, n: int, base_rows, comp_rows) -> Subspace:
    # complement rows are zero on the base pivots; reducing the base rows
    # against the complement pivots gives the canonical basis directly
    sub, mul = f.sub, f.mul
    if not comp_rows:
        return Subspace(f, n, tuple(base_rows))
    comp_piv = [next(c for c, x in enumerate(r) if x) for r in comp_rows]
    reduced = []
    for row in base_rows:
        row = list(row)
        for p, cr in zip(comp_piv, comp_rows):
            a = row[p]
            if a:
                ma = mul[a]
                row = [sub[x][ma[y]] for x, y in zip(row, cr)]
        reduced.append(tuple(row))
    rows = sorted(reduced + list(comp_rows), key=lambda r: next(c for c, x in enumerate(r) if x))
    return Subspace(f, n, tuple(rows))


def enumerate_disjoint_from(space: AmbientSpace, fixed: Subspace, d: int) -> Iterator[Subspace]:
    if not fixed.basis:
        raise DimensionOutOfRange("the fixed subspace must be nonempty")
    if fixed.n != space.n or fixed.field != space.field:
        raise NotInSpace(f"{fixed!r} does not live in {space}")
    _check_dim(space, d, 0)
    for U in enumerate_subspaces(space, d):
        if join_rank(U, fixed) == U.rank + fixed.rank:
            yield U


def enumerate_within(space: AmbientSpace, container: Subspace, d: int) -> Iterator[Subspace]:
    """Every d-space contained in ``container`` (affine ones only for AG)."""
    if container.n != space.n or container.field != space.field:
        raise NotInSpace(f"{container!r} does not live in {space}")
    if not (-1 <= d <= container.dim):
        raise DimensionOutOfRange(f"dimension {d} outside [-1, {container.dim}]")
    f, n = space.field, space.n
    add, mul = f.add, f.mul
    B = container.basis
    for coeffs in _echelon_stream(f.q, len(B), range(len(B)), d + 1):
        rows = []
        for c in coeffs:
            v = [0] * (n + 1)
            for a, b in zip(c, B):
                if a:
                    ma = mul[a]
                    v = [add[x][ma[y]] for x, y in zip(v, b)]
            rows.append(v)
        U = _canonical(f, n, rows)
        if not space.affine or U.is_affine:
            yield U


def _canonical(f: FieldSpec, n: int, rows) -> Subspace:
    return Subspace(f, n, _rref(f, rows, n + 1))


def trace_at_infinity(space: AmbientSpace, U: Subspace) -> Subspace:
    """The part of U inside the hyperplane x0 = 0."""
    if not U.is_affine:
        raise NotAffine(f"{U!r} is contained in the hyperplane at infinity")
    # canonical rows after the first have a zero in column 0 and stay canonical
    return Subspace(U.field, U.n, U.basis[1:])


def affine_intersection_dim(U: Subspace, V: Subspace) -> int:
    """Dimension of U ∩ V as an affine space; -1 when the meet has no affine point."""
    if U.n != V.n or U.field != V.field:
        raise AmbientMismatch(f"{U!r} and {V!r} live in different spaces")
    if not (U.is_affine and V.is_affine):
        raise NotAffine("affine intersection needs two affine subspaces")
    w = meet_dim(U, V)
    if w < 0:
        return -1
    at_inf = meet_dim(Subspace(U.field, U.n, U.basis[1:]), Subspace(V.field, V.n, V.basis[1:]))
    return w if w > at_inf else -1


def intersection_dim(space: AmbientSpace, U: Subspace, V: Subspace) -> int:
    """Projective meet dimension for PG, affine meet dimension for AG."""
    if space.affine:
        return affine_intersection_dim(U, V)
    return meet_dim(U, V)
