"""Brute-force ground truth on tiny geometries.

The intersection graph has the k-spaces as vertices and an edge whenever two
of them meet in at least a t-space, so t-intersecting families are cliques.
Vertex sets are Python ints used as bitsets. Vertex i is the i-th k-space in
canonical basis order, which makes "lexicographically least clique" a plain
comparison of sorted index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import geometry as geo
from .counting import count_affine_subspaces, gaussian
from .errors import NotIntersecting, TooLarge
from .families import (
    Family,
    candidate_partners,
    extensions,
    identify_example,
    in_k_plus_one_space,
    is_pairwise_t_intersecting,
    make_family,
    meets_in_at_least,
)
from .geometry import AmbientSpace
from .linalg import Subspace, contains, meet, meet_all

DEFAULT_CAP = 200_000
DEFAULT_BUDGET = 2_000_000


def vertex_count(space: AmbientSpace, k: int) -> int:
    if space.affine:
        return count_affine_subspaces(space.n, k, space.q)
    return gaussian(space.n + 1, k + 1, space.q)


@dataclass
class Graph:
    space: AmbientSpace
    k: int
    t: int
    vertices: list[Subspace]
    adj: list[int]

    def family(self, indices: Iterable[int]) -> Family:
        return make_family(self.space, self.k, (self.vertices[i] for i in indices))


def intersection_graph(space: AmbientSpace, k: int, t: int, cap: int = DEFAULT_CAP) -> Graph:
    count = vertex_count(space, k)
    if count > cap:
        raise TooLarge(f"{space} has {count} {k}-spaces, above the cap of {cap}")
    vertices = sorted(geo.enumerate_subspaces(space, k), key=lambda U: U.basis)
    index = {U: i for i, U in enumerate(vertices)}
    ok = meets_in_at_least(space, t)
    adj = [0] * len(vertices)
    for i, U in enumerate(vertices):
        bits = 0
        for V in candidate_partners(space, U, t, k):
            j = index.get(V)
            if j is not None and j != i and ok(U, V):
                bits |= 1 << j
        adj[i] = bits
    return Graph(space, k, t, vertices, adj)


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def degeneracy_order(adj: Sequence[int]) -> list[int]:
    """Smallest-last vertex order; ties broken by vertex index."""
    n = len(adj)
    deg = [bin(a).count("1") for a in adj]
    alive = (1 << n) - 1
    removed = []
    for _ in range(n):
        v = min(_bits(alive), key=lambda u: (deg[u], u))
        removed.append(v)
        alive &= ~(1 << v)
        for u in _bits(adj[v] & alive):
            deg[u] -= 1
    return removed[::-1]


class _Budget(Exception):
    pass


class CliqueSearch:
    """Branch and bound with a greedy colouring bound (bitset version).

    Vertices are relabelled so that bit position follows the given order.
    """

    def __init__(self, adj: Sequence[int], order: Sequence[int], budget: int):
        self.order = list(order)
        self.pos = pos = {v: i for i, v in enumerate(self.order)}
        self.adj = [0] * len(adj)
        for v, a in enumerate(adj):
            bits = 0
            for u in _bits(a):
                bits |= 1 << pos[u]
            self.adj[pos[v]] = bits
        self.budget = budget
        self.nodes = 0

    def _colour(self, P: int) -> list[tuple[int, int]]:
        adj = self.adj
        out = []
        colour = 0
        uncoloured = P
        while uncoloured:
            colour += 1
            Q = uncoloured
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~adj[v] & ~low
                uncoloured &= ~low
                out.append((v, colour))
        return out

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget

    def maximum(self, P: int, lower: int = 0) -> tuple[list[int], bool]:
        """A maximum clique in P (original labels) and whether it is proven."""
        best: list[int] = []
        floor = lower

        def expand(C: list[int], P: int) -> None:
            nonlocal best, floor
            self._tick()
            for v, c in reversed(self._colour(P)):
                if len(C) + c <= floor:
                    return
                Pv = P & self.adj[v]
                if Pv:
                    expand(C + [v], Pv)
                elif len(C) + 1 > floor:
                    best, floor = C + [v], len(C) + 1
                P &= ~(1 << v)

        try:
            expand([], self._relabel(P))
            done = True
        except _Budget:
            done = False
        return [self.order[v] for v in best], done

    def exists(self, P: int, size: int) -> bool:
        """Is there a clique of ``size`` vertices inside P (original labels)?"""

        def expand(depth: int, P: int) -> bool:
            self._tick()
            for v, c in reversed(self._colour(P)):
                if depth + c < size:
                    return False
                if depth + 1 == size:
                    return True
                if expand(depth + 1, P & self.adj[v]):
                    return True
                P &= ~(1 << v)
            return False

        if size <= 0:
            return True
        return expand(0, self._relabel(P))

    def all_of_size(self, P: int, size: int) -> list[list[int]]:
        found = []

        def expand(C: list[int], P: int) -> None:
            self._tick()
            for v, c in reversed(self._colour(P)):
                if len(C) + c < size:
                    return
                if len(C) + 1 == size:
                    found.append(sorted(self.order[u] for u in C + [v]))
                else:
                    expand(C + [v], P & self.adj[v])
                P &= ~(1 << v)

        expand([], self._relabel(P))
        return sorted(found)

    def _relabel(self, P: int) -> int:
        out = 0
        for v in _bits(P):
            out |= 1 << self.pos[v]
        return out


def _lex_least(adj: Sequence[int], search: CliqueSearch, size: int) -> list[int]:
    """Lexicographically least clique of the given size (vertex indices)."""
    n = len(adj)
    chosen: list[int] = []
    P = (1 << n) - 1
    while len(chosen) < size:
        for v in _bits(P):
            above = P & adj[v] & ~((1 << (v + 1)) - 1)
            if search.exists(above, size - len(chosen) - 1):
                chosen.append(v)
                P = above
                break
        else:
            raise AssertionError("no clique of the requested size")
    return chosen


@dataclass
class CliqueResult:
    size: int
    witness: Family
    optimal: bool
    nodes: int = 0


def _greedy(adj: Sequence[int], order: Sequence[int]) -> list[int]:
    C: list[int] = []
    P = (1 << len(adj)) - 1
    for v in reversed(order):
        if P >> v & 1:
            C.append(v)
            P &= adj[v]
    return C


def max_clique(space: AmbientSpace, k: int, t: int, budget: int = DEFAULT_BUDGET, cap: int = DEFAULT_CAP, graph: Graph | None = None) -> CliqueResult:
    """Largest family of k-spaces pairwise meeting in at least a t-space."""
    g = graph or intersection_graph(space, k, t, cap)
    n = len(g.vertices)
    if n == 0:
        return CliqueResult(0, make_family(space, k, []), True)
    order = degeneracy_order(g.adj)
    greedy = _greedy(g.adj, order)
    search = CliqueSearch(g.adj, order, budget)
    best, done = search.maximum((1 << n) - 1, lower=len(greedy) - 1)
    if len(best) < len(greedy):
        best = greedy
    witness = sorted(best)
    if done:
        try:
            witness = _lex_least(g.adj, search, len(best))
        except _Budget:
            pass
    return CliqueResult(len(best), g.family(witness), done, search.nodes)


def all_maximum_cliques(space: AmbientSpace, k: int, t: int, size: int, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> list[Family]:
    g = intersection_graph(space, k, t, cap)
    search = CliqueSearch(g.adj, degeneracy_order(g.adj), budget)
    try:
        cliques = search.all_of_size((1 << len(g.vertices)) - 1, size)
    except _Budget:
        raise TooLarge("clique enumeration exceeded its node budget") from None
    return [g.family(c) for c in cliques]


def is_pencil(fam: Family, t: int) -> bool:
    """All members share a common t-space (affine in AG)."""
    if not fam.members:
        return False
    common = meet_all(fam.members)
    if fam.space.affine:
        return common.is_affine and common.dim >= t
    return common.dim >= t


def extend_to_maximal(fam: Family, t: int) -> Family:
    """Greedy extension in canonical basis order; the result is maximal."""
    pair = is_pairwise_t_intersecting(fam, t)
    if not pair:
        raise NotIntersecting(f"family is not pairwise {t}-intersecting: {pair.witness}")
    ok = meets_in_at_least(fam.space, t)
    added: list[Subspace] = []
    for U in extensions(fam, t):
        if all(ok(U, V) for V in added):
            added.append(U)
    return make_family(fam.space, fam.k, list(fam.members) + added)


# -- probing maximal non-pencil families ---------------------------------------


def maximal_cliques(adj: Sequence[int], budget: int) -> tuple[list[list[int]], bool]:
    """Bron-Kerbosch with pivoting over bitsets; second value False if cut."""
    out: list[list[int]] = []
    nodes = 0

    def bk(R: list[int], P: int, X: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if not P and not X:
            out.append(sorted(R))
            return
        pivot = max(_bits(P | X), key=lambda u: (bin(P & adj[u]).count("1"), -u))
        for v in _bits(P & ~adj[pivot]):
            bk(R + [v], P & adj[v], X & adj[v])
            P &= ~(1 << v)
            X |= 1 << v

    try:
        bk([], (1 << len(adj)) - 1, 0)
        return sorted(out), True
    except _Budget:
        return sorted(out), False


@dataclass
class ProbeReport:
    max_size: int | None
    optimal: bool
    histogram: dict[int, int]
    witnesses: list[Family] = field(default_factory=list)
    identified: list[str | None] = field(default_factory=list)
    in_k_plus_one: list[bool] = field(default_factory=list)
    examined: int = 0
    pencils: int = 0

    @property
    def heuristic(self) -> bool:
        return not self.optimal

    def as_dict(self) -> dict:
        return {
            "max_size": self.max_size,
            "optimal": self.optimal,
            "histogram": {str(s): c for s, c in sorted(self.histogram.items())},
            "witness": [[U.to_lists() for U in W] for W in self.witnesses[:1]],
        }


def _greedy_avoiding(g: Graph, seed: list[int], avoid: Subspace) -> list[int]:
    """Extend a clique, taking vertices that miss ``avoid`` first."""
    P = (1 << len(g.vertices)) - 1
    for v in seed:
        P &= g.adj[v]
    C = list(seed)
    first = [v for v in _bits(P) if not contains(g.vertices[v], avoid)]
    rest = [v for v in _bits(P) if contains(g.vertices[v], avoid)]
    for v in first + rest:
        if P >> v & 1:
            C.append(v)
            P &= g.adj[v]
    return sorted(C)


def second_largest_probe(space: AmbientSpace, k: int, t: int, seeds="pairs", budget: int = 100_000, cap: int = DEFAULT_CAP) -> ProbeReport:
    """Collect maximal families that are not pencils and report their sizes.

    ``seeds`` is ``"exhaustive"`` (all maximal cliques, until ``budget``
    search nodes), ``"pairs"`` (every intersecting pair, extended greedily
    away from its common part, up to ``budget`` pairs) or an explicit list of
    families to extend. Only a completed exhaustive run is reported optimal.
    """
    if isinstance(seeds, (list, tuple)) and not seeds:
        return ProbeReport(None, False, {})
    g = intersection_graph(space, k, t, cap)
    index = {U: i for i, U in enumerate(g.vertices)}
    cliques: list[list[int]] = []
    complete = False
    if seeds == "exhaustive":
        cliques, complete = maximal_cliques(g.adj, budget)
    elif seeds == "pairs":
        seen = 0
        for i in range(len(g.vertices)):
            for j in _bits(g.adj[i] & ~((1 << (i + 1)) - 1)):
                if seen >= budget:
                    break
                seen += 1
                W = meet(g.vertices[i], g.vertices[j])
                cliques.append(_greedy_avoiding(g, [i, j], W))
    elif isinstance(seeds, (list, tuple)):
        for fam in seeds:
            ext = extend_to_maximal(fam, t)
            cliques.append(sorted(index[U] for U in ext))
    else:
        raise ValueError(f"unknown seeding strategy {seeds!r}")
    unique = sorted({tuple(c) for c in cliques})
    histogram: dict[int, int] = {}
    by_size: dict[int, list[Family]] = {}
    pencils = 0
    for c in unique:
        fam = g.family(c)
        if is_pencil(fam, t):
            pencils += 1
            continue
        histogram[len(c)] = histogram.get(len(c), 0) + 1
        by_size.setdefault(len(c), []).append(fam)
    if not histogram:
        return ProbeReport(None, complete, {}, examined=len(unique), pencils=pencils)
    top = max(histogram)
    witnesses = by_size[top]
    return ProbeReport(
        top,
        complete,
        histogram,
        witnesses,
        [identify_example(W, t) for W in witnesses],
        [in_k_plus_one_space(W) for W in witnesses],
        len(unique),
        pencils,
    )
