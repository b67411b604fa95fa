"""Exact verification of the counting inequalities over parameter grids.

Each lemma id carries a hypothesis predicate, copied literally from its
statement, and an evaluator producing a ``Verdict``. Some verdicts carry
named parts (sign checks of the terms in a difference decomposition, or
explicitly computed special values); a tuple passes only if its main relation
and all of its parts hold.
"""

from __future__ import annotations

import ast
import csv
import io
import json
import operator
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .counting import (
    Params,
    _gauss,
    bound_psi_families,
    bound_small_cover,
    size_example,
)
from .errors import EmptyGrid, HypothesisViolation, ParseError, UnknownLemma

Number = int | Fraction

RELATIONS: dict[str, Callable] = {
    "<": operator.lt,
    "<=": operator.le,
    ">=": operator.ge,
    ">": operator.gt,
    "=": operator.eq,
}


@dataclass(frozen=True)
class Verdict:
    lemma: str
    params: Params
    lhs: Number
    rhs: Number
    relation: str
    holds: bool
    parts: tuple["Verdict", ...] = ()

    @property
    def all_hold(self) -> bool:
        return self.holds and all(p.all_hold for p in self.parts)

    def rows(self) -> list["Verdict"]:
        out = [self]
        for p in self.parts:
            out.extend(p.rows())
        return out


def verdict(lemma: str, p: Params, lhs: Number, relation: str, rhs: Number, parts: Iterable[Verdict] = ()) -> Verdict:
    return Verdict(lemma, p, lhs, rhs, relation, RELATIONS[relation](lhs, rhs), tuple(parts))


def _th(m: int, q: int) -> int:
    return _gauss(m + 1, 1, q)


def _G(n: int, k: int, q: int) -> int:
    return _gauss(n, k, q)


# -- hypotheses ---------------------------------------------------------------


def _ge0(p: Params) -> bool:
    return p.t is not None and p.t >= 0 and p.k > p.t


def _bounds_parts(p: Params) -> list[int]:
    parts = []
    if p.q >= 3:
        parts.append(1)
    if p.q >= 4:
        parts.append(2)
    if p.n >= 1:
        parts.append(3)
    if p.n > p.k > 0:
        parts.append(4)
    return parts


def _big_n(p: Params) -> bool:
    return p.n > 2 * p.k + p.t + 2


HYPOTHESES: dict[str, Callable[[Params], bool]] = {
    "BOUNDS_A1": lambda p: p.n >= p.k >= 0 and p.q >= 2 and bool(_bounds_parts(p)),
    "L47": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.q >= 2,
    "L47B": lambda p: _ge0(p) and p.n >= 2 * p.k - p.t and p.q >= 2,
    "PVERSCHIL1": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.q >= 3 and p.k > 2 * p.t + 2,
    "PVERSCHIL2": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.k > p.t + 1 and p.q >= 3 and p.k < 2 * p.t + 2,
    "PVERSCHIL3": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.q >= 3 and p.k == 2 * p.t + 2,
    "ONG2X_P": lambda p: _ge0(p) and _big_n(p) and p.q >= 3 and p.k > p.t + 1 and p.t > 0 and p.x is not None and p.x > 2,
    "LELIJK_P": lambda p: _ge0(p) and p.k > p.t + 1 and p.t > 0 and _lelijk_q(p) and p.x is not None and p.x >= 2,
    "AVERSCHIL1": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.q >= 3 and p.k > 2 * p.t + 1,
    "AVERSCHIL2": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.k > p.t + 1 and p.q >= 3 and p.k < 2 * p.t + 1,
    "AVERSCHIL3": lambda p: _ge0(p) and p.n > 2 * p.k - p.t and p.q >= 3 and p.k == 2 * p.t + 1,
    "ONG2X_A": lambda p: _ge0(p) and _big_n(p) and p.q >= 3 and p.k > p.t + 1 and p.t > 0 and p.x is not None and p.x > 2,
    "LELIJK_A": lambda p: _ge0(p) and p.k > p.t + 1 and p.t > 0 and _lelijk_q(p) and p.x is not None and p.x >= 2,
    "GEENNAAM_P": lambda p: _ge0(p) and _big_n(p) and p.q >= 3 and p.k > p.t + 1 and p.t > 0,
    "AFFIENBLA": lambda p: _ge0(p) and _big_n(p) and p.q >= 3 and p.k > p.t + 1 and p.t > 0,
    "LAATSTE_P": lambda p: _ge0(p) and _big_n(p) and p.k > 2 * p.t + 2 and p.x is not None and 2 <= p.x <= p.k - p.t + 1 and p.t > 0 and p.q >= 2,
    "LAATSTE_A_EXTRA": lambda p: _ge0(p) and _big_n(p) and p.k > 2 * p.t + 1 and p.x is not None and 3 <= p.x <= p.k - p.t + 1 and p.t > 0 and p.q >= 3,
    "LAATSTE_A": lambda p: _ge0(p) and _big_n(p) and p.k > 2 * p.t + 1 and p.q >= 3,
}


def _lelijk_q(p: Params) -> bool:
    return (p.q >= 4 and p.n > 2 * p.k + p.t + 2) or (p.q == 3 and p.n > 2 * p.k + p.t + 3)


LEMMAS = tuple(HYPOTHESES)
USES_X = {"ONG2X_P", "LELIJK_P", "ONG2X_A", "LELIJK_A", "LAATSTE_P", "LAATSTE_A_EXTRA"}


# -- evaluators ---------------------------------------------------------------


def _bounds(p: Params) -> Verdict:
    q, n, k = p.q, p.n, p.k
    g = _G(n, k, q)
    e = q ** (k * (n - k))
    checks = {
        1: ("BOUNDS_A1/1", g, "<=", 2 * e),
        2: ("BOUNDS_A1/2", q * g, "<=", (q + 2) * e),
        3: ("BOUNDS_A1/3", (q - 1) * _th(n, q), "<=", q ** (n + 1)),
        4: ("BOUNDS_A1/4", q * g, ">=", (q + 1) * e),
    }
    parts = [verdict(name, p, lhs, rel, rhs) for name, lhs, rel, rhs in (checks[i] for i in _bounds_parts(p))]
    first = parts[0]
    return verdict("BOUNDS_A1", p, first.lhs, first.relation, first.rhs, parts[1:])


def _small_cover_lower(p: Params, affine: bool) -> Verdict:
    q, n, k, t = p.q, p.n, p.k, p.t
    a = k - t
    lhs = bound_small_cover("AG" if affine else "PG", p) if p.n > 2 * k - t else _small_cover_raw(p, affine)
    mult = q * _th(t, q) if affine else _th(t + 1, q)
    rhs = _G(n - t - 1, a - 1, q) + mult * (_th(a, q) - 1) * _th(a, q) * _G(n - t - 2, a - 2, q)
    return verdict("L47B" if affine else "L47", p, lhs, ">=", rhs)


def _small_cover_raw(p: Params, affine: bool) -> int:
    # the cover bound formula itself, also at n = 2k - t
    q, n, k, t = p.q, p.n, p.k, p.t
    th1, tha = _th(t + 1, q), _th(k - t, q)
    last = tha if affine else 1
    return 2 * _G(n - t - 1, k - t - 1, q) + (th1 * tha - th1 - last) * tha * _G(n - t - 2, k - t - 2, q)


def _p1(p: Params) -> int:
    return size_example("P1", "sum", p)


def _p2(p: Params) -> int:
    return size_example("P2", "closed", p)


def _a1(p: Params) -> int:
    return size_example("A1", "sum", p)


def _a2(p: Params) -> int:
    return size_example("A2", "closed", p)


def _proj_w(p: Params) -> tuple[int, list[Fraction], Fraction]:
    """w1, the w2 terms and the full decomposition at k = 2t + 2."""
    q, n, t = p.q, p.n, p.t
    w1 = _G(n - t - 2, t, q) + _th(t + 2, q) - _th(2 * t + 3, q)
    w2s = []
    total = Fraction(w1)
    for j in range(t + 1):
        w2 = Fraction(q ** (n - t - j - 1) - 2 * q ** (t - j + 1) + 1, q - 1) - q ** (2 * (t + 1 - j)) * Fraction(
            (q ** (n - 3 * t - 3 + j) - 1) * (q ** (t + 2) - 1), (q ** (j + 1) - 1) * (q ** (t + 2 - j) - 1)
        )
        w2s.append(w2)
        total += q ** ((t + 1 - j) * (t - j)) * _G(n - 2 * t - 3, t - j, q) * _G(t + 1, j, q) * Fraction(q ** (t + 3) - 1, q ** (t - j + 1) - 1) * w2
    return w1, w2s, total


def _aff_w(p: Params) -> tuple[int, list[Fraction], Fraction]:
    """w1, the w2 terms and the full decomposition at k = 2t + 1."""
    q, n, t = p.q, p.n, p.t
    w1 = _G(n - t - 2, t - 1, q) + _th(t + 1, q) - _th(2 * t + 1, q)
    w2s = []
    total = Fraction(w1)
    for j in range(t):
        w2 = Fraction(q ** (n - t - j - 1) - 2 * q ** (t - j) + 1, (q - 1) * (q ** (n - 3 * t + j - 1) - 1)) - Fraction(
            q ** (t + 1) - 1, (q ** (j + 1) - 1) * (q ** (t - j + 1) - 1)
        ) * q ** (2 * (t - j))
        w2s.append(w2)
        total += q ** ((t - j) * (t - j - 1)) * _G(n - 2 * t - 2, t - j, q) * _G(t, j, q) * (q ** (t + 2) - 1) * w2
    return w1, w2s, total


def _with_j(p: Params, j: int) -> Params:
    return Params(p.q, p.n, p.k, p.t, p.x, j)


def _pverschil3(p: Params) -> Verdict:
    big, small = _p2(p), _p1(p)
    w1, w2s, total = _proj_w(p)
    t, n = p.t, p.n
    parts = [verdict("PVERSCHIL3/decomposition", p, total, "=", big - small)]
    if t == 1 and n == 8:
        # the one tuple where the first term is negative and the sizes are compared directly
        parts.append(verdict("PVERSCHIL3/w1_negative", p, w1, "<", 0))
    elif t >= 1:
        parts.append(verdict("PVERSCHIL3/w1", p, w1, ">=", 0))
    parts += [verdict("PVERSCHIL3/w2", _with_j(p, j), w2, ">=", 0) for j, w2 in enumerate(w2s)]
    return verdict("PVERSCHIL3", p, big, ">=", small, parts)


def _averschil3(p: Params) -> Verdict:
    q, n, t = p.q, p.n, p.t
    big, small = _a2(p), _a1(p)
    w1, w2s, total = _aff_w(p)
    parts = [verdict("AVERSCHIL3/decomposition", p, total, "=", big - small)]
    if t == 1:
        value = 1 + q * _th(2, q) * _th(n - 4, q)
        parts.append(verdict("AVERSCHIL3/equal_second", p, big, "=", value))
        parts.append(verdict("AVERSCHIL3/equal_first", p, small, "=", value))
    elif t == 2 and n == 9:
        poly = q**9 + 2 * q**8 + 3 * q**7 + 2 * q**6 + q**5
        parts.append(verdict("AVERSCHIL3/difference", p, big - small, "=", poly))
    elif t >= 2:
        parts.append(verdict("AVERSCHIL3/w1", p, w1, ">=", 0))
    parts += [verdict("AVERSCHIL3/w2", _with_j(p, j), w2, ">=", 0) for j, w2 in enumerate(w2s)]
    return verdict("AVERSCHIL3", p, big, ">=", small, parts)


def _f(p: Params, affine: bool) -> int:
    return max(_a1(p), _a2(p)) if affine else max(_p1(p), _p2(p))


def _psi_at(p: Params, kind: str, x: int) -> int:
    return bound_psi_families(kind, Params(p.q, p.n, p.k, p.t, x))


def _laatste_rhs(p: Params) -> int:
    q, n, k, t, x = p.q, p.n, p.k, p.t, p.x
    a = k - t
    return _th(t + x, q) * _G(n - t - x + 1, a - x + 1, q) + _th(a, q) ** 2 * _G(n - t - 2, a - 2, q) + _th(a - 1, q) * _G(n - t - 1, a - 1, q)


def _laatste_a_rhs(p: Params) -> int:
    q, n, k, t = p.q, p.n, p.k, p.t
    a = k - t
    return q * q * _th(t - 1, q) * _G(n - t - 1, a - 1, q) + _th(a, q) ** 2 * _G(n - t - 2, a - 2, q) + _th(a - 1, q) * _G(n - t - 1, a - 1, q)


EVALUATORS: dict[str, Callable[[Params], Verdict]] = {
    "BOUNDS_A1": _bounds,
    "L47": lambda p: _small_cover_lower(p, False),
    "L47B": lambda p: _small_cover_lower(p, True),
    "PVERSCHIL1": lambda p: verdict("PVERSCHIL1", p, _p1(p), ">", _p2(p)),
    "PVERSCHIL2": lambda p: verdict("PVERSCHIL2", p, _p2(p), ">", _p1(p)),
    "PVERSCHIL3": _pverschil3,
    "ONG2X_P": lambda p: verdict("ONG2X_P", p, _psi_at(p, "PG", p.x), "<", _psi_at(p, "PG", 2)),
    "LELIJK_P": lambda p: verdict("LELIJK_P", p, _psi_at(p, "PG", p.x), "<", _f(p, False)),
    "AVERSCHIL1": lambda p: verdict("AVERSCHIL1", p, _a1(p), ">", _a2(p)),
    "AVERSCHIL2": lambda p: verdict("AVERSCHIL2", p, _a2(p), ">", _a1(p)),
    "AVERSCHIL3": _averschil3,
    "ONG2X_A": lambda p: verdict("ONG2X_A", p, _psi_at(p, "AG", p.x), "<", _psi_at(p, "AG", 2)),
    "LELIJK_A": lambda p: verdict("LELIJK_A", p, _psi_at(p, "AG", p.x), "<", _f(p, True)),
    "GEENNAAM_P": lambda p: verdict("GEENNAAM_P", p, bound_small_cover("PG", p), "<", _f(p, False)),
    "AFFIENBLA": lambda p: verdict("AFFIENBLA", p, bound_small_cover("AG", p), "<", _f(p, True)),
    "LAATSTE_P": lambda p: verdict("LAATSTE_P", p, _p1(p), ">", _laatste_rhs(p)),
    "LAATSTE_A_EXTRA": lambda p: verdict("LAATSTE_A_EXTRA", p, _a1(p), ">", _laatste_rhs(p)),
    "LAATSTE_A": lambda p: verdict("LAATSTE_A", p, _a1(p), ">", _laatste_a_rhs(p)),
}


def _lookup(lemma: str) -> str:
    key = lemma.upper()
    if key not in HYPOTHESES:
        raise UnknownLemma(f"unknown lemma id {lemma!r}; known ids: {', '.join(LEMMAS)}")
    return key


def hypothesis_holds(lemma: str, p: Params) -> bool:
    return HYPOTHESES[_lookup(lemma)](p)


def check_lemma(lemma: str, p: Params) -> Verdict:
    key = _lookup(lemma)
    if not HYPOTHESES[key](p):
        raise HypothesisViolation(f"{key} makes no claim at {p}")
    return EVALUATORS[key](p)


# -- grids --------------------------------------------------------------------

GRID_VARS = ("q", "t", "k", "n", "x", "j")

DEFAULT_GRIDS = {
    "BOUNDS_A1": "q=2..5,n=0..16,k=0..n",
}
_STANDARD = "q=2..5,t=1..3,k=t+1..t+6,n=2k-t..2k+t+8"
_WITH_X = _STANDARD + ",x=2..k-t+1"


def default_grid(lemma: str) -> str:
    key = _lookup(lemma)
    if key in DEFAULT_GRIDS:
        return DEFAULT_GRIDS[key]
    return _WITH_X if key in USES_X else _STANDARD


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}


def _eval_expr(text: str, env: dict[str, int]) -> int:
    src = re.sub(r"(\d)\s*([a-z])", r"\1*\2", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError:
        raise ParseError(f"cannot parse bound {text!r}") from None

    def ev(node) -> int:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ParseError(f"bound {text!r} uses {node.id!r} before it is defined")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ParseError(f"unsupported expression in bound {text!r}")

    return ev(tree)


def parse_grid(spec: str) -> list[tuple[str, str, str]]:
    """Split ``var=lo..hi,...`` into (var, lo, hi) triples, left to right."""
    out = []
    seen = set()
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ParseError(f"grid entry {chunk!r} is not of the form var=lo..hi")
        var, rng = (s.strip() for s in chunk.split("=", 1))
        if var not in GRID_VARS:
            raise ParseError(f"unknown grid variable {var!r}")
        if var in seen:
            raise ParseError(f"grid variable {var!r} given twice")
        seen.add(var)
        lo, _, hi = rng.partition("..")
        out.append((var, lo, hi or lo))
    if not out:
        raise ParseError("empty grid")
    return out


def expand_grid(spec: str) -> list[dict[str, int]]:
    ranges = parse_grid(spec)
    envs: list[dict[str, int]] = [{}]
    for var, lo, hi in ranges:
        nxt = []
        for env in envs:
            a, b = _eval_expr(lo, env), _eval_expr(hi, env)
            for v in range(a, b + 1):
                nxt.append({**env, var: v})
        envs = nxt
    return envs


def grid_params(lemma: str, spec: str) -> list[Params]:
    """Hypothesis-filtered parameter tuples in lexicographic order."""
    key = _lookup(lemma)
    envs = expand_grid(spec)
    needs_x = key in USES_X
    out = set()
    for env in envs:
        if "q" not in env or "n" not in env or "k" not in env:
            raise ParseError("a grid must bind q, n and k")
        if "t" not in env and key != "BOUNDS_A1":
            raise ParseError(f"{key} needs t in the grid")
        t = env.get("t") if key != "BOUNDS_A1" else None
        if needs_x and "x" not in env:
            xs = range(2, env["k"] - (t or 0) + 2)
        elif needs_x:
            xs = [env["x"]]
        else:
            xs = [None]
        for x in xs:
            p = Params(env["q"], env["n"], env["k"], t, x, None)
            if p.q >= 2 and HYPOTHESES[key](p):
                out.add(p)
    return sorted(out, key=param_key)


def param_key(p: Params) -> tuple:
    return tuple(-1 if v is None else v for v in (p.q, p.n, p.k, p.t, p.x, p.j))


@dataclass
class GridReport:
    lemma: str
    verdicts: list[Verdict]
    passed: int = 0
    failed: int = 0
    failures: list[Verdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _evaluate(args: tuple[str, Params]) -> Verdict:
    return EVALUATORS[args[0]](args[1])


def run_grid(lemma: str, spec: str | None = None, threads: int = 1) -> GridReport:
    key = _lookup(lemma)
    params = grid_params(key, spec or default_grid(key))
    if not params:
        raise EmptyGrid(f"no tuple of the grid satisfies the hypotheses of {key}")
    jobs = [(key, p) for p in params]
    if threads > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        verdicts = [_evaluate(j) for j in jobs]
    failures = [v for v in verdicts if not v.all_hold]
    return GridReport(key, verdicts, len(verdicts) - len(failures), len(failures), failures)


# -- decomposition identities ---------------------------------------------------


def decomposition_identities(space_kind: str, p: Params) -> list[Verdict]:
    """Refined sums against closed forms, and the difference decomposition.

    ``p.k`` is ignored; it is fixed to 2t + 2 (projective) or 2t + 1 (affine).
    """
    kind = space_kind.upper()
    q, n, t = p.q, p.n, p.t
    k = 2 * t + 2 if kind == "PG" else 2 * t + 1
    pk = Params(q, n, k, t)
    if not (t >= 0 and n > 2 * k - t):
        raise HypothesisViolation(f"need n > 2k - t with k = {k}, got n={n}, t={t}")
    first, second = ("P1", "P2") if kind == "PG" else ("A1", "A2")
    out = []
    for ex in (first, second):
        out.append(verdict(f"{ex}/refined", pk, size_example(ex, "refined", pk), "=", size_example(ex, "closed", pk)))
    _, _, total = _proj_w(pk) if kind == "PG" else _aff_w(pk)
    diff = size_example(second, "closed", pk) - size_example(first, "closed", pk)
    out.append(verdict(f"{second}-{first}/decomposition", pk, total, "=", diff))
    return out


# -- export -------------------------------------------------------------------

COLUMNS = ("lemma", "q", "n", "k", "t", "x", "j", "lhs", "rhs", "relation", "holds")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def verdict_rows(verdicts: Iterable[Verdict]) -> list[dict[str, str]]:
    rows = []
    for top in verdicts:
        for v in top.rows():
            p = v.params
            values = (v.lemma, p.q, p.n, p.k, p.t, p.x, p.j, v.lhs, v.rhs, v.relation, v.holds)
            rows.append(dict(zip(COLUMNS, map(_fmt, values))))
    return rows


def to_csv(verdicts: Iterable[Verdict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(verdict_rows(verdicts))
    return buf.getvalue()


def to_json(verdicts: Iterable[Verdict], summary: dict | None = None) -> str:
    doc = {"rows": verdict_rows(verdicts)}
    if summary is not None:
        doc["summary"] = summary
    return json.dumps(doc, indent=1) + "\n"
