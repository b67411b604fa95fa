"""Families of equal-dimension subspaces: constructions, predicates, file format.

The four non-pencil constructions share two shapes. The ``*1`` families are
the k-spaces of a fixed (k+1)-space together with everything through a fixed
t-space that meets it in at least a (t+1)-space. The ``*2`` families are the
k-spaces meeting a fixed (t+2)-space in at least a (t+1)-space, restricted in
the affine case to a chosen set of (t+1)-spaces with distinct directions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator

from . import geometry as geo
from .counting import Params, gaussian, size_example, size_pencil, theta
from .errors import (
    BadAnchors,
    DimensionOutOfRange,
    EmptyFamily,
    HypothesisViolation,
    InvariantViolation,
    NotIntersecting,
    ParseError,
    SubspaceEKRError,
)
from .geometry import AG, PG, AmbientSpace
from .gf import field_make, prime_power
from .linalg import Subspace, contains, join, join_all, join_rank, meet, meet_dim, rref_canonicalize, span_units


@dataclass(frozen=True)
class Family:
    space: AmbientSpace
    k: int
    members: tuple[Subspace, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.members)

    def __contains__(self, U: Subspace) -> bool:
        return U in self.member_set

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)


def make_family(space: AmbientSpace, k: int, members: Iterable[Subspace]) -> Family:
    """Deduplicate, sort and validate a member collection."""
    unique = sorted(set(members), key=lambda U: U.basis)
    for U in unique:
        if U.dim != k:
            raise InvariantViolation(f"member {U!r} has dimension {U.dim}, expected {k}")
        if not geo.in_space(space, U):
            raise InvariantViolation(f"member {U!r} is not a subspace of {space}")
    return Family(space, k, tuple(unique))


@dataclass
class Check:
    """Outcome of a family predicate, with a witness when it fails."""

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


def meets_in_at_least(space: AmbientSpace, t: int):
    """Return a predicate U, V -> intersection dimension >= t."""
    if space.affine:
        return lambda U, V: geo.affine_intersection_dim(U, V) >= t

    def pg(U: Subspace, V: Subspace) -> bool:
        return join_rank(U, V) <= U.rank + V.rank - t - 1

    return pg


# -- anchors ----------------------------------------------------------------


def canonical_anchors(space: AmbientSpace, k: int, t: int) -> dict[str, Subspace]:
    """Deterministic anchors: coordinate subspaces chosen so that the
    incidence conditions of every construction hold.

    In both geometries the span of pi and delta equals gamma when k = t + 1.
    """
    f, n = space.field, space.n
    if space.affine:
        delta = span_units(f, n, [0, *range(n - t + 1, n + 1)])
        pi = span_units(f, n, [0, *range(n - t + 2, n + 1), *range(1, k - t + 2)])
        gamma = span_units(f, n, [0, 1, 2, *range(n - t + 1, n + 1)])
        origin = rref_canonicalize(f, [[1, 1] + [0] * (n - 1)], n)
        return {"delta": delta, "pi": pi, "gamma": gamma, "origin": origin}
    delta = span_units(f, n, range(n - t, n + 1))
    pi = span_units(f, n, [*range(n - t + 1, n + 1), *range(0, k - t + 1)])
    gamma = span_units(f, n, [0, 1, *range(n - t, n + 1)])
    return {"delta": delta, "pi": pi, "gamma": gamma}


def _check_params(space: AmbientSpace, p: Params) -> None:
    if p.q != space.q or p.n != space.n:
        raise HypothesisViolation(f"parameters {p} do not describe {space}")
    if not (0 <= p.t < p.k):
        raise HypothesisViolation(f"need 0 <= t < k, got t={p.t}, k={p.k}")
    if not p.n > 2 * p.k - p.t:
        raise HypothesisViolation(f"need n > 2k - t, got n={p.n}, k={p.k}, t={p.t}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise BadAnchors(message)


def _first_point_outside(space: AmbientSpace, container: Subspace, avoid: Subspace) -> Subspace:
    for P in geo.enumerate_within(space, container, 0):
        if not contains(avoid, P):
            return P
    raise BadAnchors("no affine point available for the base point")


# -- constructions ------------------------------------------------------------


def make_pencil(space: AmbientSpace, delta: Subspace, k: int) -> Family:
    """All k-spaces through ``delta``."""
    if not (delta.dim <= k <= space.n):
        raise DimensionOutOfRange(f"need dim(delta) <= k <= n, got {delta.dim}, {k}, {space.n}")
    return make_family(space, k, geo.enumerate_through(space, delta, k))


def canonical_delta(space: AmbientSpace, t: int) -> Subspace:
    return canonical_anchors(space, t + 1, t)["delta"]


def build_first(space: AmbientSpace, k: int, t: int, delta: Subspace, sigma: Subspace, s1: Iterable[Subspace] | None = None) -> Family:
    """The k-spaces of ``sigma`` (or the given subset of them) together with
    all k-spaces through ``delta`` meeting ``sigma`` in at least a (t+1)-space."""
    inside = list(geo.enumerate_within(space, sigma, k)) if s1 is None else list(s1)
    through = [U for U in geo.enumerate_through(space, delta, k) if meet_dim(U, sigma) >= t + 1]
    return make_family(space, k, inside + through)


def build_second(space: AmbientSpace, k: int, gamma: Subspace, rs: Iterable[Subspace]) -> Family:
    """All k-spaces whose meet with ``gamma`` contains one of ``rs``."""
    members: set[Subspace] = set()
    for R in rs:
        members.update(geo.enumerate_through(space, R, k))
    return make_family(space, k, members)


def _within_through(space: AmbientSpace, container: Subspace, origin: Subspace, d: int) -> list[Subspace]:
    # the d-spaces of container through origin, enumerated inside the container
    return [U for U in geo.enumerate_within(space, container, d) if contains(U, origin)]


def _distinct_traces(members: list[Subspace]) -> bool:
    traces = [U.basis[1:] for U in members]
    return len(set(traces)) == len(traces)


def make_example(example_id: str, space: AmbientSpace, p: Params, anchors: dict | None = None) -> Family:
    """Build one of the named families, from canonical or supplied anchors.

    ``anchors`` may hold ``delta``, ``pi``, ``gamma``, ``origin`` and, for the
    affine families, an explicit ``s1`` or ``r`` list of subspaces.
    """
    example_id = example_id.upper()
    if example_id == "PENCIL":
        if p.q != space.q or p.n != space.n or not (0 <= p.t <= p.k <= p.n):
            raise HypothesisViolation(f"need 0 <= t <= k <= n for a pencil in {space}, got {p}")
        delta = (anchors or {}).get("delta") or canonical_delta(space, p.t)
        _require(delta.dim == p.t and geo.in_space(space, delta), "delta must be a t-space of the ambient space")
        return make_pencil(space, delta, p.k)
    if example_id not in ("P1", "P2", "A1", "A2"):
        raise HypothesisViolation(f"unknown example {example_id!r}")
    if (example_id[0] == "A") != space.affine:
        raise HypothesisViolation(f"{example_id} does not live in {space}")
    _check_params(space, p)
    k, t = p.k, p.t
    given = dict(anchors or {})
    base = canonical_anchors(space, k, t)
    if example_id == "A1" and t < 1:
        raise HypothesisViolation("the affine first example needs t >= 1")
    if example_id in ("P1", "A1"):
        delta = given.get("delta", base["delta"])
        pi = given.get("pi", base["pi"] if "delta" not in given else None)
        _require(pi is not None, "pi must be supplied together with delta")
        for name, U in (("delta", delta), ("pi", pi)):
            _require(geo.in_space(space, U), f"{name} is not a subspace of {space}")
        _require(delta.dim == t, f"delta must be a {t}-space")
        _require(pi.dim == k, f"pi must be a {k}-space")
        _require(meet_dim(pi, delta) == t - 1, "pi must meet delta in a (t-1)-space")
        sigma = join(pi, delta)
        if example_id == "P1":
            return build_first(space, k, t, delta, sigma)
        if space.affine:
            _require(geo.affine_intersection_dim(pi, delta) == t - 1, "pi must meet delta in an affine (t-1)-space")
        delta_inf = geo.trace_at_infinity(space, delta)
        _require(not contains(pi, delta_inf), "the trace of pi must not contain the trace of delta")
        if "s1" in given:
            s1 = list(given["s1"])
            _check_s1(space, k, sigma, pi, delta_inf, s1)
        else:
            origin = given.get("origin") or (base["origin"] if "delta" not in given else _first_point_outside(space, pi, delta))
            _require(contains(pi, origin) and not contains(delta, origin), "the base point must lie in pi and outside delta")
            s1 = [U for U in _within_through(space, sigma, origin, k) if not contains(U, delta_inf)]
        return build_first(space, k, t, delta, sigma, s1)
    gamma = given.get("gamma", base["gamma"])
    _require(geo.in_space(space, gamma) and gamma.dim == t + 2, f"gamma must be a {t + 2}-space of {space}")
    if example_id == "P2":
        return build_second(space, k, gamma, geo.enumerate_within(space, gamma, t + 1))
    if "r" in given:
        rs = list(given["r"])
        _check_r(space, t, gamma, rs)
    else:
        origin = given.get("origin") or (base["origin"] if "gamma" not in given else _first_point_outside(space, gamma, geo.hyperplane_at_infinity(space)))
        _require(contains(gamma, origin) and origin.is_affine, "the base point must be an affine point of gamma")
        rs = _within_through(space, gamma, origin, t + 1)
    return build_second(space, k, gamma, rs)


def _check_s1(space, k, sigma, pi, delta_inf, s1):
    _require(pi in s1, "the first set must include pi")
    for U in s1:
        _require(geo.in_space(space, U) and U.dim == k and contains(sigma, U), "first-set members must be affine k-spaces of <pi, delta>")
        _require(not contains(U, delta_inf), "first-set members must not contain the trace of delta")
    _require(_distinct_traces(s1), "first-set members must have pairwise distinct traces at infinity")
    used = {U.basis[1:] for U in s1}
    for U in geo.enumerate_within(space, sigma, k):
        if U.basis[1:] not in used and not contains(U, delta_inf):
            raise BadAnchors(f"the first set is not maximal: {U!r} can be added")


def _check_r(space, t, gamma, rs):
    for R in rs:
        _require(geo.in_space(space, R) and R.dim == t + 1 and contains(gamma, R), "members of r must be affine (t+1)-spaces of gamma")
    _require(_distinct_traces(rs), "members of r must have pairwise distinct traces at infinity")
    _require(len(set(rs)) == theta(t + 1, space.q), "r must contain one (t+1)-space for each t-space at infinity of gamma")


def closed_size(example_id: str, p: Params) -> int:
    if example_id.upper() == "PENCIL":
        return size_pencil(p)
    return size_example(example_id.upper(), "closed", p)


# -- predicates ---------------------------------------------------------------


def is_pairwise_t_intersecting(fam: Family, t: int) -> Check:
    """Every two members meet in at least a t-space (affine t-space in AG).

    The witness is the first failing pair in member order.
    """
    ok = meets_in_at_least(fam.space, t)
    ms = fam.members
    for i, U in enumerate(ms):
        for V in ms[i + 1 :]:
            if not ok(U, V):
                return Check(False, (U, V))
    return Check(True)


def candidate_partners(space: AmbientSpace, anchor: Subspace, t: int, d: int) -> set[Subspace]:
    """Every d-space meeting ``anchor`` in at least a t-space (affine in AG).

    Such a space contains some t-subspace of ``anchor`` (an affine one in AG),
    so it suffices to enumerate through those.
    """
    out: set[Subspace] = set()
    if t < 0:
        out.update(geo.enumerate_subspaces(space, d))
        return out
    for T in geo.enumerate_within(space, anchor, t):
        out.update(geo.enumerate_through(space, T, d))
    return out


def extensions(fam: Family, t: int) -> list[Subspace]:
    """All k-spaces outside ``fam`` meeting every member in at least a t-space."""
    ok = meets_in_at_least(fam.space, t)
    if fam.members:
        pool = candidate_partners(fam.space, fam.members[0], t, fam.k)
    else:
        pool = set(geo.enumerate_subspaces(fam.space, fam.k))
    found = [U for U in pool if U not in fam.member_set and all(ok(U, M) for M in fam.members)]
    return sorted(found, key=lambda U: U.basis)


def is_maximal(fam: Family, t: int) -> Check:
    """No k-space outside ``fam`` meets every member in at least a t-space.

    On failure the witness is the lexicographically least extension.
    """
    pair = is_pairwise_t_intersecting(fam, t)
    if not pair:
        raise NotIntersecting(f"family is not pairwise {t}-intersecting: {pair.witness}")
    ext = extensions(fam, t)
    return Check(not ext, ext[0] if ext else None)


# -- covers -----------------------------------------------------------------


@dataclass
class CoverReport:
    psi: int | None
    covers: Family | None
    max_dim: int

    @property
    def found(self) -> bool:
        return self.psi is not None


def covers_of_dim(fam: Family, t: int, d: int) -> list[Subspace]:
    ok = meets_in_at_least(fam.space, t)
    pool = candidate_partners(fam.space, fam.members[0], t, d)
    return sorted((T for T in pool if all(ok(T, M) for M in fam.members)), key=lambda U: U.basis)


def cover_analysis(fam: Family, t: int, max_dim: int | None = None) -> CoverReport:
    """Smallest dimension of a subspace meeting every member in at least a
    t-space, and every subspace of that dimension doing so."""
    if not fam.members:
        raise EmptyFamily("cover analysis needs a nonempty family")
    top = fam.k if max_dim is None else max_dim
    if top > fam.k:
        raise DimensionOutOfRange(f"max_dim {top} exceeds the member dimension {fam.k}")
    for d in range(max(t, 0), top + 1):
        found = covers_of_dim(fam, t, d)
        if found:
            return CoverReport(d, Family(fam.space, d, tuple(found)), top)
    return CoverReport(None, None, top)


def cover_saturation(fam: Family, report: CoverReport) -> Check:
    """Every k-space through every cover is a member."""
    if not report.found:
        return Check(True)
    for T in report.covers:
        for U in geo.enumerate_through(fam.space, T, fam.k):
            if U not in fam.member_set:
                return Check(False, (T, U))
    return Check(True)


# -- identification of small families ----------------------------------------


def identify_example(fam: Family, t: int, cap: int = 20000) -> str | None:
    """Name the construction ``fam`` equals under some anchor choice.

    Tries pencils, then the second and first constructions over all anchors
    of the right dimensions. Returns None when nothing matches or when the
    anchor search would exceed ``cap`` candidates.
    """
    space, k = fam.space, fam.k
    if not fam.members:
        return None
    target = fam.member_set
    common = fam.members[0]
    for M in fam.members[1:]:
        common = meet(common, M)
    if common.dim >= t and (not space.affine or common.is_affine):
        for T in geo.enumerate_within(space, common, t):
            if set(geo.enumerate_through(space, T, k)) == target:
                return "PENCIL"
    second = "A2" if space.affine else "P2"
    first = "A1" if space.affine else "P1"
    n = space.n
    if t + 2 <= n and gaussian(n + 1, t + 3, space.q) <= cap:
        for gamma in geo.enumerate_subspaces(space, t + 2):
            if space.affine:
                rs = {meet(M, gamma) for M in fam.members}
                rs = {R for R in rs if R.dim == t + 1}
                if not rs or not all(R.is_affine for R in rs) or not _distinct_traces(list(rs)):
                    continue
            else:
                rs = list(geo.enumerate_within(space, gamma, t + 1))
            if space.affine and len(rs) != theta(t + 1, space.q):
                continue
            if build_second(space, k, gamma, rs).member_set == target:
                return second
    if k + 1 <= n and t >= 0 and gaussian(n + 1, t + 1, space.q) * gaussian(n - t, k + 1 - t, space.q) <= cap:
        for delta in geo.enumerate_subspaces(space, t):
            for sigma in geo.enumerate_through(space, delta, k + 1):
                inside = [M for M in fam.members if contains(sigma, M)]
                s1 = [M for M in inside if not contains(M, delta)]
                if space.affine:
                    if t < 1:
                        continue
                    dinf = geo.trace_at_infinity(space, delta)
                    if any(contains(M, dinf) for M in s1) or not s1 or not _distinct_traces(s1):
                        continue
                    cand = build_first(space, k, t, delta, sigma, s1 + [M for M in inside if contains(M, delta)])
                else:
                    cand = build_first(space, k, t, delta, sigma)
                if cand.member_set == target:
                    return first
    return None


def in_k_plus_one_space(fam: Family) -> bool:
    return join_all(fam.members).dim <= fam.k + 1


# -- file format --------------------------------------------------------------


def family_to_text(fam: Family, report: dict | None = None) -> str:
    lines = [
        "{",
        f'  "space": "{fam.space.kind}",',
        f'  "q": {fam.space.q},',
        f'  "n": {fam.space.n},',
        f'  "k": {fam.k},',
    ]
    rows = [json.dumps(U.to_lists(), separators=(",", ":")) for U in fam.members]
    if rows:
        body = ",\n".join("    " + r for r in rows)
        lines.append('  "subspaces": [\n' + body + "\n  ]" + ("," if report is not None else ""))
    else:
        lines.append('  "subspaces": []' + ("," if report is not None else ""))
    if report is not None:
        lines.append('  "report": ' + json.dumps(report, separators=(", ", ": ")))
    lines.append("}")
    return "\n".join(lines) + "\n"


def family_save(fam: Family, destination, report: dict | None = None) -> None:
    text = family_to_text(fam, report)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


def family_from_text(text: str) -> Family:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a family document: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("a family document must be an object")
    for key in ("space", "q", "n", "k", "subspaces"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    kind, q, n, k, subs = doc["space"], doc["q"], doc["n"], doc["k"], doc["subspaces"]
    if kind not in (PG, AG):
        raise ParseError(f"space must be PG or AG, got {kind!r}")
    for name, value in (("q", q), ("n", n), ("k", k)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"{name} must be an integer")
    if prime_power(q) is None:
        raise ParseError(f"q={q} is not a prime power")
    try:
        space = AmbientSpace(kind, n, field_make(q))
    except SubspaceEKRError as exc:
        raise ParseError(str(exc)) from None
    if not isinstance(subs, list):
        raise ParseError("subspaces must be a list of matrices")
    members = []
    for i, mat in enumerate(subs):
        if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
            raise ParseError(f"subspace {i} is not a matrix")
        try:
            U = rref_canonicalize(space.field, mat, n)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"subspace {i}: {exc}") from None
        if U.dim != k:
            raise InvariantViolation(f"subspace {i} has dimension {U.dim}, expected {k}")
        if space.affine and not U.is_affine:
            raise InvariantViolation(f"subspace {i} lies inside the hyperplane at infinity")
        members.append(U)
    if len(set(members)) != len(members):
        raise InvariantViolation("duplicate subspaces after canonicalization")
    return make_family(space, k, members)


def family_load(source) -> Family:
    if hasattr(source, "read"):
        return family_from_text(source.read())
    with open(source) as fh:
        return family_from_text(fh.read())


def subspace_list_from_json(space: AmbientSpace, matrices) -> list[Subspace]:
    return [rref_canonicalize(space.field, m, space.n) for m in matrices]
