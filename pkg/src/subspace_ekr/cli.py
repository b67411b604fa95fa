"""Command-line frontend: counts, constructions, checks, searches and grids.

Exit codes: 0 success, 1 a check came out false, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import counting as C
from . import families as F
from . import inequalities as I
from . import oracles as O
from .errors import EmptyGrid, ParseError, SubspaceEKRError, TooLarge, UnknownLemma
from .geometry import make_space
from .gf import MAX_ORDER, prime_power
from .linalg import rref_canonicalize


class Parser(argparse.ArgumentParser):
    def error(self, message):
        # one line, always naming the flag argparse complained about
        self.exit(2, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"argument {flag}: {message}")


def _field_order(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if prime_power(q) is None:
        raise argparse.ArgumentTypeError(f"{q} is not a prime power")
    return q


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _space_kind(text: str) -> str:
    kind = text.upper()
    if kind not in ("PG", "AG"):
        raise argparse.ArgumentTypeError(f"expected pg or ag, got {text!r}")
    return kind


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--threads", type=_positive, default=argparse.SUPPRESS, help="worker cap (default: all cores)")

    parser = Parser(prog="subspace-ekr", description="Intersecting families of subspaces over finite fields.", parents=[common])
    cmds = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    count = cmds.add_parser("count", help="exact counts", parents=[common])
    what = count.add_subparsers(dest="what", required=True, parser_class=Parser)
    p = what.add_parser("gaussian", parents=[common])
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=_field_order, required=True)
    p = what.add_parser("theta", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=_field_order, required=True)
    p = what.add_parser("disjoint", parents=[common])
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--j", type=_nonneg, required=True)
    p.add_argument("--q", type=_field_order, required=True)
    p = what.add_parser("size", parents=[common])
    p.add_argument("--example", choices=C.EXAMPLES, required=True)
    p.add_argument("--form", choices=C.FORMS, required=True)
    _add_qnkt(p)
    p = what.add_parser("threshold", parents=[common])
    p.add_argument("--space", type=_space_kind, required=True)
    _add_qnkt(p)

    p = cmds.add_parser("construct", help="build an example family", parents=[common])
    p.add_argument("--example", choices=C.EXAMPLES, required=True)
    _add_qnkt(p)
    p.add_argument("--anchors")
    p.add_argument("--out", required=True)

    p = cmds.add_parser("verify", help="check a stored family", parents=[common])
    p.add_argument("property", choices=("t-intersecting", "maximal"))
    p.add_argument("--family", required=True)
    p.add_argument("--t", type=_nonneg, required=True)

    p = cmds.add_parser("analyze", help="cover analysis", parents=[common])
    p.add_argument("what", choices=("cover",))
    p.add_argument("--family", required=True)
    p.add_argument("--t", type=_nonneg, required=True)
    p.add_argument("--max-dim", type=_nonneg)

    p = cmds.add_parser("search", help="clique search oracles", parents=[common])
    p.add_argument("what", choices=("max-clique", "probe"))
    p.add_argument("--space", type=_space_kind, required=True)
    _add_qnkt(p)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--seeds", choices=("pairs", "exhaustive"))

    p = cmds.add_parser("check", help="inequality grids and decompositions", parents=[common])
    p.add_argument("what", nargs="?", choices=("decompositions",))
    p.add_argument("--lemma")
    p.add_argument("--grid")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--space", type=_space_kind)
    p.add_argument("--q", type=_field_order)
    p.add_argument("--n", type=_nonneg)
    p.add_argument("--t", type=_nonneg)
    return parser


def _add_qnkt(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=_field_order, required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--t", type=_nonneg, required=True)


def _params(a) -> C.Params:
    return C.Params(a.q, a.n, a.k, a.t)


def _require_geometry(a) -> None:
    if a.q > MAX_ORDER:
        raise UsageError("--q", f"field tables are built only up to q = {MAX_ORDER}")
    if a.n < 1:
        raise UsageError("--n", "the ambient dimension must be at least 1")
    if a.k > a.n:
        raise UsageError("--k", f"k={a.k} exceeds n={a.n}")
    if a.t > a.k:
        raise UsageError("--t", f"t={a.t} exceeds k={a.k}")


def _out(text: str) -> None:
    sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_count(a) -> int:
    if a.what == "gaussian":
        _out(f"{C.gaussian(a.n, a.k, a.q)}\n")
    elif a.what == "theta":
        _out(f"{C.theta(a.n, a.q)}\n")
    elif a.what == "disjoint":
        if a.m > a.n:
            raise UsageError("--m", f"m={a.m} exceeds n={a.n}")
        _out(f"{C.count_disjoint(a.n, a.m, a.j, a.q)}\n")
    elif a.what == "size":
        _out(f"{C.size_example(a.example, a.form, _params(a))}\n")
    else:
        th = C.hm_threshold(a.space, _params(a))
        for name, value in th.sizes.items():
            _out(f"{name} {value}\n")
        _out(f"threshold {th.value} {th.branch}{' tie' if th.tie else ''}\n")
    return 0


def _read_json(path: str, flag: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(flag, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(flag, f"{path} is not JSON: {exc}") from None


def _load_anchors(path: str, space) -> dict:
    doc = _read_json(path, "--anchors")
    if not isinstance(doc, dict):
        raise UsageError("--anchors", "expected an object of named subspaces")
    out = {}
    try:
        for name, value in doc.items():
            if name in ("s1", "r"):
                out[name] = [rref_canonicalize(space.field, m, space.n) for m in value]
            elif name in ("delta", "pi", "gamma", "origin"):
                out[name] = rref_canonicalize(space.field, value, space.n)
            else:
                raise UsageError("--anchors", f"unknown anchor {name!r}")
    except (ValueError, TypeError) as exc:
        raise UsageError("--anchors", str(exc)) from None
    return out


def cmd_construct(a) -> int:
    _require_geometry(a)
    kind = "AG" if a.example.startswith("A") else "PG"
    space = make_space(kind, a.n, a.q)
    anchors = _load_anchors(a.anchors, space) if a.anchors else None
    p = _params(a)
    fam = F.make_example(a.example, space, p, anchors)
    closed = C.size_pencil(p) if a.example == "PENCIL" else C.size_example(a.example, "closed", p)
    F.family_save(fam, a.out)
    _out(f"members {len(fam)} closed {closed}\n")
    return 0 if len(fam) == closed else 1


def _load_family(path: str) -> F.Family:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError("--family", f"cannot read {path}: {exc.strerror}") from None
    try:
        return F.family_from_text(text)
    except SubspaceEKRError as exc:
        raise UsageError("--family", str(exc)) from None


def _matrix(U) -> str:
    return json.dumps(U.to_lists(), separators=(",", ":"))


def cmd_verify(a) -> int:
    fam = _load_family(a.family)
    pairwise = F.is_pairwise_t_intersecting(fam, a.t)
    if not pairwise:
        U, V = pairwise.witness
        _out(f"not {a.t}-intersecting: {_matrix(U)} {_matrix(V)}\n")
        return 1
    if a.property == "t-intersecting":
        _out(f"{a.t}-intersecting, {len(fam)} members\n")
        return 0
    check = F.is_maximal(fam, a.t)
    if check:
        _out(f"maximal, {len(fam)} members\n")
        return 0
    _out(f"not maximal: extends by {_matrix(check.witness)}\n")
    return 1


def cmd_analyze(a) -> int:
    fam = _load_family(a.family)
    if a.max_dim is not None and a.max_dim > fam.k:
        raise UsageError("--max-dim", f"must not exceed k={fam.k}")
    report = F.cover_analysis(fam, a.t, a.max_dim)
    saturated = F.cover_saturation(fam, report) if report.found else None
    doc = {
        "psi": report.psi,
        "covers": [U.to_lists() for U in report.covers],
        "saturated": None if saturated is None else bool(saturated),
    }
    _out(json.dumps(doc, separators=(",", ":")) + "\n")
    return 1 if saturated is not None and not saturated else 0


def cmd_search(a) -> int:
    _require_geometry(a)
    space = make_space(a.space, a.n, a.q)
    try:
        if a.what == "max-clique":
            if a.seeds:
                raise UsageError("--seeds", "only used by probe")
            res = O.max_clique(space, a.k, a.t, budget=a.budget or O.DEFAULT_BUDGET)
            report = {"max_size": res.size, "optimal": res.optimal, "nodes": res.nodes}
            F.family_save(res.witness, sys.stdout, report)
            return 0
        if not a.seeds:
            raise UsageError("--seeds", "required for probe")
        rep = O.second_largest_probe(space, a.k, a.t, a.seeds, budget=a.budget or 100_000)
    except TooLarge as exc:
        raise UsageError("--n", str(exc)) from None
    report = rep.as_dict()
    report["heuristic"] = rep.heuristic
    report["identified"] = rep.identified
    report["in_k_plus_one_space"] = rep.in_k_plus_one
    report["examined"] = rep.examined
    witness = rep.witnesses[0] if rep.witnesses else F.make_family(space, a.k, [])
    del report["witness"]
    F.family_save(witness, sys.stdout, report)
    return 0


def _emit(verdicts, fmt: str) -> None:
    _out(I.to_csv(verdicts) if fmt == "csv" else I.to_json(verdicts))


def cmd_check(a, threads: int) -> int:
    if a.what == "decompositions":
        for flag in ("space", "q", "n", "t"):
            if getattr(a, flag) is None:
                raise UsageError(f"--{flag}", "required for decompositions")
        if a.lemma or a.grid:
            raise UsageError("--lemma" if a.lemma else "--grid", "not used by decompositions")
        verdicts = I.decomposition_identities(a.space, C.Params(a.q, a.n, 0, a.t))
        _emit(verdicts, a.format)
        return 0 if all(v.all_hold for v in verdicts) else 1
    if not a.lemma:
        raise UsageError("--lemma", "required")
    try:
        report = I.run_grid(a.lemma, a.grid, threads=threads)
    except UnknownLemma as exc:
        raise UsageError("--lemma", exc.args[0]) from None
    except (ParseError, EmptyGrid) as exc:
        raise UsageError("--grid", str(exc)) from None
    _emit(report.verdicts, a.format)
    print(f"{report.lemma}: {len(report.verdicts)} tuples, {report.passed} pass, {report.failed} fail", file=sys.stderr)
    return 0 if report.ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    threads = getattr(a, "threads", None) or os.cpu_count() or 1
    try:
        if a.command == "count":
            return cmd_count(a)
        if a.command == "construct":
            return cmd_construct(a)
        if a.command == "verify":
            return cmd_verify(a)
        if a.command == "analyze":
            return cmd_analyze(a)
        if a.command == "search":
            return cmd_search(a)
        return cmd_check(a, threads)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except SubspaceEKRError as exc:
        print(f"{parser.prog}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
