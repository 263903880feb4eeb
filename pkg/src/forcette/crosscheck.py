"""Batch verification suites over a corpus of posets and name tables."""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

from .corpus import corpus_posets, default_names, p3, c2, sweep_formulas
from .extension import (
    extension,
    extension_equality_check,
    filter_correspondence_report,
    hf_models,
)
from .formula import Formula, constants
from .names import Name, NameUniverse, enumerate_names
from .poset import Poset
from .report import Report
from .ro import RegularOpenAlgebra, canonical_morphism, inclusion_morphism, ro_algebra
from .semantics import (
    BridgeChecker,
    SemanticsContext,
    boolean_value_index,
    sup_forcing_index,
)
from .sheaves import (
    check_topology_axioms,
    dense_topology,
    equivalence_report,
    induced_topology,
    sup_dense_agreement,
    sup_topology,
)

SUITES = ("bridge", "boolval", "truth", "filters", "topology", "equiv")


@dataclass(frozen=True)
class CorpusEntry:
    poset: Poset
    names: Mapping[str, Name]

    @property
    def label(self) -> str:
        return self.poset.name or "poset"

    def name_list(self) -> list[Name]:
        return list(dict.fromkeys(self.names.values()))


def default_corpus(suite: str) -> list[CorpusEntry]:
    """P3 and C2 for the formula suites, every corpus poset for the others."""
    if suite in ("bridge", "boolval", "truth", "filters"):
        posets = [p3(), c2()]
    elif suite == "equiv":
        posets = [p3(), c2()]
    else:
        posets = list(corpus_posets().values())
    return [CorpusEntry(P, default_names(P)) for P in posets]


def _kind(f: Formula) -> str:
    return type(f).__name__.lower()


def _first(items: list, fmt: Callable) -> str:
    return f"first failure {fmt(items[0])}; {len(items)} total" if items else ""


def bridge_suite(corpus: Sequence[CorpusEntry], rank: int = 1, depth: int = 2) -> Report:
    report = Report(f"bridge (rank <= {rank}, depth <= {depth})")
    pairs = 0
    for entry in corpus:
        P = entry.poset
        formulas = sweep_formulas(entry.name_list(), depth)
        if not formulas:
            continue
        checker = BridgeChecker.for_rank(P, rank, entry.name_list())
        masks = [(f, checker.lhs_mask(f), checker.rhs_mask(f)) for f in formulas]
        for k, p in enumerate(P):
            bad = [f for f, lhs, rhs in masks if (lhs >> k & 1) != (rhs >> k & 1)]
            pairs += len(formulas)
            report.check(f"{entry.label} p={p} ({len(formulas)} formulas)", not bad, _first(bad, str))
    report.note(f"{pairs} (p, formula) pairs checked")
    return report


def carried_names(B: RegularOpenAlgebra, names: Sequence[Name]) -> list[Name]:
    """``r(i*(x))`` for each name, deduplicated in order."""
    checker_universe = NameUniverse.closure(B.base, names)
    checker = BridgeChecker(B.base, checker_universe, B)
    return list(dict.fromkeys(checker.carry(x) for x in names))


def boolval_context(B: RegularOpenAlgebra, constants_: Sequence[Name], rank: int = 1) -> SemanticsContext:
    """Functional names of rank at most ``rank`` over ``B`` minus zero, plus the constants."""
    Q = B.as_poset(include_zero=False)
    functional = enumerate_names(Q, rank).functional()
    return SemanticsContext.over_algebra(B, list(functional) + list(constants_))


def boolval_suite(corpus: Sequence[CorpusEntry], rank: int = 1, depth: int = 2) -> Report:
    report = Report(f"boolean value equals supremum of forcers (rank <= {rank}, depth <= {depth})")
    checked = 0
    for entry in corpus:
        B = ro_algebra(entry.poset)
        carried = carried_names(B, entry.name_list())
        formulas = sweep_formulas(carried, depth)
        if not formulas:
            continue
        ctx = boolval_context(B, carried, rank)
        by_kind: dict[str, list[Formula]] = {}
        failures: dict[str, list[Formula]] = {}
        for f in formulas:
            kind = _kind(f)
            by_kind.setdefault(kind, []).append(f)
            if sup_forcing_index(ctx, f) != boolean_value_index(ctx, f):
                failures.setdefault(kind, []).append(f)
        for kind, fs in by_kind.items():
            checked += len(fs)
            bad = failures.get(kind, [])
            report.check(f"RO({entry.label}) {kind} ({len(fs)} formulas)", not bad, _first(bad, str))
    report.note(f"{checked} formulas checked")
    return report


def truth_suite(corpus: Sequence[CorpusEntry], rank: int = 1, depth: int = 2) -> Report:
    report = Report(f"truth lemma (rank <= {rank}, depth <= {depth})")
    for entry in corpus:
        P = entry.poset
        formulas = sweep_formulas(entry.name_list(), depth)
        if not formulas:
            continue
        U = enumerate_names(P, rank).union(entry.name_list())
        ctx = SemanticsContext(P, U)
        forcing = [(f, ctx.forcers_mask(f)) for f in formulas]
        for G in P.generic_filters():
            E = extension(P, G, U)
            g_mask = P.mask(G)
            forced_false, true_unforced = [], []
            for f, mask in forcing:
                holds = hf_models(E, f)
                if mask & g_mask and not holds:
                    forced_false.append(f)
                if holds and not mask & g_mask:
                    true_unforced.append(f)
            tag = f"{entry.label} G={P.format_set(G)}"
            report.check(f"{tag} forced=>true ({len(formulas)} formulas)", not forced_false,
                         _first(forced_false, str))
            report.check(f"{tag} true=>forced ({len(formulas)} formulas)", not true_unforced,
                         _first(true_unforced, str))
    return report


def filters_suite(corpus: Sequence[CorpusEntry], rank: int = 1, depth: int = 2) -> Report:
    report = Report(f"filter correspondence (rank <= {rank}, depth <= {depth})")
    for entry in corpus:
        P = entry.poset
        i = canonical_morphism(P)
        sub = filter_correspondence_report(i)
        report.extend(_prefixed(sub, entry.label))
        U = enumerate_names(P, rank).union(entry.name_list())
        formulas = sweep_formulas(entry.name_list(), depth)
        sub = extension_equality_check(i, U, formulas)
        report.extend(_prefixed(sub, entry.label))
    return report


def _prefixed(sub: Report, label: str) -> Report:
    out = Report(sub.title)
    for c in sub.cases:
        out.check(f"{label} {c.label}", c.ok, c.detail)
    out.notes.extend(sub.notes)
    return out


def topology_suite(corpus: Sequence[CorpusEntry], rank: int = 1, depth: int = 2) -> Report:
    report = Report("induced topologies")
    for entry in corpus:
        P = entry.poset
        B = ro_algebra(P)
        Q = B.as_poset(include_zero=False)
        dense_P, dense_Q, sup_B = dense_topology(P), dense_topology(Q), sup_topology(B)
        induced, _ = induced_topology(canonical_morphism(P, B), dense_Q)
        report.check(f"{entry.label} induced along i equals dense", induced == dense_P,
                     "; ".join(induced.differences(dense_P)))
        induced_e, _ = induced_topology(inclusion_morphism(B), sup_B)
        report.check(f"{entry.label} induced along e equals dense", induced_e == dense_Q,
                     "; ".join(induced_e.differences(dense_Q)))
        for J in (dense_P, dense_Q, sup_B):
            axioms = check_topology_axioms(J)
            report.check(f"{entry.label} {J.name} topology on {J.base.name} axioms", axioms.ok,
                         "; ".join(f"{c.label}: {c.detail}" for c in axioms.failures))
        agree = sup_dense_agreement(B)
        report.check(f"{entry.label} dense sieves join to their element", agree.ok,
                     "; ".join(c.label for c in agree.failures))
    return report


def equiv_suite(corpus: Sequence[CorpusEntry], max_card: int = 2) -> Report:
    report = Report(f"bounded sheaf equivalence (max card {max_card})")
    for entry in corpus:
        P = entry.poset
        B = ro_algebra(P)
        Q = B.as_poset(include_zero=False)
        i, e = canonical_morphism(P, B), inclusion_morphism(B)
        dense_P, dense_Q, sup_B = dense_topology(P), dense_topology(Q), sup_topology(B)
        for m, Js, Jt in ((i, dense_P, dense_Q), (e, dense_Q, sup_B), (i.then(e), dense_P, sup_B)):
            sub = equivalence_report(m, Js, Jt, max_card)
            report.extend(_prefixed(sub, f"{m.source.name}->{m.target.name}"))
    return report


def run_suite(
    suite: str,
    corpus: Sequence[CorpusEntry] | None = None,
    rank: int = 1,
    depth: int = 2,
    max_card: int = 2,
) -> Report:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    if corpus is None:
        corpus = default_corpus(suite)
    if suite == "equiv":
        return equiv_suite(corpus, max_card)
    fn = {
        "bridge": bridge_suite,
        "boolval": boolval_suite,
        "truth": truth_suite,
        "filters": filters_suite,
        "topology": topology_suite,
    }[suite]
    return fn(corpus, rank, depth)


__all__ = [
    "CorpusEntry",
    "SUITES",
    "boolval_context",
    "boolval_suite",
    "bridge_suite",
    "carried_names",
    "default_corpus",
    "equiv_suite",
    "filters_suite",
    "run_suite",
    "topology_suite",
    "truth_suite",
]
