"""The ``forcette`` command line.

Exit codes: 0 true or passing, 1 false or failing, 2 parse or usage error,
3 semantic error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .crosscheck import SUITES, CorpusEntry, run_suite
from .errors import ForcingError, ParseError
from .extension import extension, truth_lemma_report
from .fileformats import load_names, load_poset, load_presheaf
from .formula import constants, parse_formula
from .names import NameUniverse, enumerate_names
from .corpus import default_names
from .poset import is_dense_morphism
from .ro import canonical_morphism, inclusion_morphism, ro_algebra
from .semantics import BridgeChecker, SemanticsContext, boolean_value_index, sup_forcing_index
from .sheaves import (
    dense_topology,
    equivalence_report,
    induced_topology,
    is_sheaf,
    sup_topology,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_SEMANTIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_formula(args):
    P = load_poset(args.poset)
    names = load_names(args.names, P)
    f = parse_formula(args.formula, names)
    return P, names, f


def _universe(P, names, f, rank: int) -> NameUniverse:
    return enumerate_names(P, rank).union(list(names.values()) + constants(f))


def cmd_complete(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    B = ro_algebra(P)
    i = canonical_morphism(P, B)
    out.append(f"carrier ({len(B)} elements): " + " ".join(B.labels))
    n = len(B)
    for op, fn in (("meet", B.meet), ("join", B.join)):
        for u in range(n):
            for v in range(n):
                out.append(f"{op} {B.labels[u]} {B.labels[v]} = {B.labels[fn(u, v)]}")
    for u in range(n):
        out.append(f"complement {B.labels[u]} = {B.labels[B.complement(u)]}")
    for p in P:
        out.append(f"i({p}) = {i(p)}")
    ok, violations = is_dense_morphism(i)
    out.extend(f"violation {v}" for v in violations)
    out.append("dense morphism " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_generic(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    for G in P.generic_filters():
        out.append(P.format_set(G))
    return EXIT_OK


def _parse_filter(text: str) -> list[str]:
    return [e.strip() for e in text.split(",") if e.strip()]


def cmd_extend(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    names = load_names(args.names, P)
    U = enumerate_names(P, args.rank).union(names.values())
    E = extension(P, _parse_filter(args.filter), U)
    out.extend(E.format_sets())
    return EXIT_OK


def cmd_force(args, out: list[str]) -> int:
    P, names, f = _load_formula(args)
    ctx = SemanticsContext(P, _universe(P, names, f, args.rank))
    result = bool(ctx.forcers_mask(f) >> P.index(args.at) & 1)
    out.append("true" if result else "false")
    return EXIT_OK if result else EXIT_FALSE


def _bridge(args):
    P, names, f = _load_formula(args)
    checker = BridgeChecker(P, _universe(P, names, f, args.rank))
    return P, checker, f


def cmd_boolval(args, out: list[str]) -> int:
    _, checker, f = _bridge(args)
    B = checker.algebra
    out.append(B.labels[boolean_value_index(checker.rhs_ctx, checker.carry_formula(f))])
    return EXIT_OK


def cmd_supval(args, out: list[str]) -> int:
    _, checker, f = _bridge(args)
    B = checker.algebra
    out.append(B.labels[sup_forcing_index(checker.rhs_ctx, checker.carry_formula(f))])
    return EXIT_OK


def cmd_bridge(args, out: list[str]) -> int:
    P, checker, f = _bridge(args)
    lhs, rhs = checker.check(args.at, f)
    out.append(f"poset forcing: {'true' if lhs else 'false'}")
    out.append(f"boolean forcing: {'true' if rhs else 'false'}")
    out.append("PASS" if lhs == rhs else "FAIL")
    return EXIT_OK if lhs == rhs else EXIT_FALSE


def cmd_truth_check(args, out: list[str]) -> int:
    P, names, f = _load_formula(args)
    U = _universe(P, names, f, args.rank)
    report = truth_lemma_report(P, f, U)
    out.append(report.render())
    return EXIT_OK if report.ok else EXIT_FALSE


def _topology(P, kind: str):
    if kind == "dense":
        return P, dense_topology(P)
    B = ro_algebra(P)
    J = sup_topology(B)
    return J.base, J


def cmd_topology(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    _, J = _topology(P, args.kind)
    out.append(f"{J.name} topology on {J.base.name or 'poset'}")
    out.extend(J.format_lines())
    return EXIT_OK


def cmd_sheaf_check(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    base, J = _topology(P, args.kind)
    F = load_presheaf(args.presheaf, base)
    ok, counterexample = is_sheaf(F, J)
    out.append("sheaf" if ok else "not a sheaf")
    if counterexample is not None:
        out.append(f"counterexample: {counterexample}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_induced(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    B = ro_algebra(P)
    J = dense_topology(B.as_poset(include_zero=False))
    induced, cert = induced_topology(canonical_morphism(P, B), J)
    out.append(f"induced topology on {P.name or 'poset'} along {P.name or 'P'} -> {J.base.name}")
    out.extend(induced.format_lines())
    if args.witnesses:
        out.extend(cert.format_lines())
    dense = dense_topology(P)
    same = induced == dense
    out.extend(f"difference {d}" for d in induced.differences(dense))
    out.append("equals dense topology " + ("PASS" if same else "FAIL"))
    return EXIT_OK if same else EXIT_FALSE


def cmd_equiv(args, out: list[str]) -> int:
    P = load_poset(args.poset)
    B = ro_algebra(P)
    i, e = canonical_morphism(P, B), inclusion_morphism(B)
    Q = B.as_poset(include_zero=False)
    dense_P, dense_Q, sup_B = dense_topology(P), dense_topology(Q), sup_topology(B)
    ok = True
    for m, Js, Jt in ((i, dense_P, dense_Q), (e, dense_Q, sup_B), (i.then(e), dense_P, sup_B)):
        report = equivalence_report(m, Js, Jt, args.maxcard)
        out.append(report.render())
        ok = ok and report.ok
    return EXIT_OK if ok else EXIT_FALSE


def cmd_crosscheck(args, out: list[str]) -> int:
    corpus = None
    if args.poset:
        corpus = []
        for path in args.poset:
            P = load_poset(path)
            names = load_names(args.names, P) if args.names else default_names(P)
            corpus.append(CorpusEntry(P, names))
    report = run_suite(args.suite, corpus, args.rank, args.depth, args.maxcard)
    out.append(report.render())
    return EXIT_OK if report.ok else EXIT_FALSE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forcette", description="Finite forcing posets and their Boolean completions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, *positional):
        p = sub.add_parser(name, help=help_)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(fn=fn)
        return p

    add("complete", cmd_complete, "regular open completion and canonical morphism", "poset")
    add("generic", cmd_generic, "list generic filters", "poset")
    p = add("extend", cmd_extend, "extension by a filter", "poset", "names")
    p.add_argument("--filter", required=True)
    p.add_argument("--rank", type=int, default=1)
    for name, fn, help_ in (
        ("force", cmd_force, "does a condition force a formula"),
        ("bridge", cmd_bridge, "compare poset and Boolean forcing at a condition"),
    ):
        p = add(name, fn, help_, "poset", "names", "formula")
        p.add_argument("--at", required=True)
        p.add_argument("--rank", type=int, default=1)
    for name, fn, help_ in (
        ("boolval", cmd_boolval, "Boolean value in the completion"),
        ("supval", cmd_supval, "join of the forcing conditions in the completion"),
        ("truth-check", cmd_truth_check, "truth lemma at every generic filter"),
    ):
        p = add(name, fn, help_, "poset", "names", "formula")
        p.add_argument("--rank", type=int, default=1)
    p = add("topology", cmd_topology, "print covering sieves", "poset")
    p.add_argument("--kind", choices=("dense", "sup"), default="dense")
    p = add("sheaf-check", cmd_sheaf_check, "check the sheaf condition", "poset", "presheaf")
    p.add_argument("--kind", choices=("dense", "sup"), default="dense")
    p = add("induced", cmd_induced, "induced topology along the canonical morphism", "poset")
    p.add_argument("--target", choices=("ro",), default="ro")
    p.add_argument("--witnesses", action="store_true")
    p = add("equiv", cmd_equiv, "bounded sheaf equivalence report", "poset")
    p.add_argument("--maxcard", type=int, default=2)
    p = add("crosscheck", cmd_crosscheck, "batch verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--poset", action="append", default=[])
    p.add_argument("--names")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--maxcard", type=int, default=2)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run a command; returns ``(exit code, stdout text, stderr text)``."""
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        code = args.fn(args, out)
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}\n"
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), "", ""
    except OSError as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    except ParseError as exc:
        return EXIT_USAGE, "", f"parse error: {exc}\n"
    except ForcingError as exc:
        return EXIT_SEMANTIC, "", f"error: {exc}\n"
    text = "\n".join(out)
    return code, (text + "\n" if text else ""), ""


def main(argv: Sequence[str] | None = None) -> int:
    code, stdout, stderr = run(argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
