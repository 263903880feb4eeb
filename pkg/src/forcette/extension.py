"""Generic extensions over name universes and filter transfer along dense maps."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import ForcingError, NotGenericError
from .formula import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Mem,
    Not,
    Or,
    Var,
    constants,
    map_constants,
)
from .names import HFSet, NameUniverse, evaluate, transport
from .poset import Poset, PosetMap
from .report import Report
from .semantics import SemanticsContext


@dataclass(frozen=True, eq=False)
class Extension:
    poset: Poset
    filter: frozenset[str]
    universe: NameUniverse
    sets: tuple[HFSet, ...]

    def __contains__(self, s: object) -> bool:
        return s in self._members

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.sets))

    def format_sets(self) -> list[str]:
        return [str(s) for s in self.sets]


def _hf_order(s: HFSet) -> tuple:
    return (s.rank, str(s))


def extension(P: Poset, G: Iterable[str], U: NameUniverse) -> Extension:
    """Evaluations of every name of ``U`` under the filter ``G``, deduplicated."""
    members = frozenset(G)
    if not P.is_filter(members):
        raise ForcingError(f"{P.format_set(members)} is not a filter")
    memo: dict = {}
    found = {evaluate(x, members, memo) for x in U}
    return Extension(P, members, U, tuple(sorted(found, key=_hf_order)))


def hf_models(E: Extension, f: Formula, env: Mapping[str, HFSet] | None = None) -> bool:
    """Classical satisfaction in the extension; quantifiers range over ``E.sets``."""
    env = dict(env or {})
    memo: dict = {}

    def value(t) -> HFSet:
        if type(t) is Var:
            try:
                return env[t.name]
            except KeyError:
                raise ForcingError(f"unbound variable {t.name!r}") from None
        return evaluate(t.name, E.filter, memo)

    def sat(g) -> bool:
        cls = type(g)
        if cls is Mem:
            return value(g.left) in value(g.right)
        if cls is Eq:
            return value(g.left) == value(g.right)
        if cls is Not:
            return not sat(g.body)
        if cls is And:
            return sat(g.left) and sat(g.right)
        if cls is Or:
            return sat(g.left) or sat(g.right)
        if cls is Implies:
            return not sat(g.left) or sat(g.right)
        if cls is Iff:
            return sat(g.left) == sat(g.right)
        # a quantifier is decided by the first member that differs from its default
        decisive = cls is Exists
        saved = env.get(g.var, _MISSING)
        try:
            for s in E.sets:
                env[g.var] = s
                if sat(g.body) == decisive:
                    return decisive
            return not decisive
        finally:
            if saved is _MISSING:
                env.pop(g.var, None)
            else:
                env[g.var] = saved

    return sat(f)


_MISSING = object()


def truth_lemma_report(
    P: Poset,
    f: Formula,
    U: NameUniverse,
    ctx: SemanticsContext | None = None,
    label: str = "",
) -> Report:
    """Check both directions of the truth lemma at every generic filter.

    (a) a forcer in ``G`` makes ``f`` true in the extension; (b) truth in the
    extension has a forcer in ``G``.
    """
    if ctx is None:
        ctx = SemanticsContext(P, U.union(constants(f)))
    ctx.check_constants(f)
    forcing = P.members(ctx.forcers_mask(f))
    report = Report(f"truth lemma{' ' + label if label else ''} (universe rank <= {U.rank_bound})")
    for G in P.generic_filters():
        E = extension(P, G, ctx.universe)
        holds = hf_models(E, f)
        inside = sorted(forcing & G, key=P.index)
        tag = f"{label} G={P.format_set(G)}".strip()
        report.check(
            f"{tag} forced=>true",
            holds or not inside,
            f"{inside[0] if inside else ''} in G forces but the extension refutes",
        )
        report.check(f"{tag} true=>forced", not holds or bool(inside), "true but no forcer in G")
    return report


def induced_filter(i: PosetMap, H: Iterable[str]) -> frozenset[str]:
    """``{p : i(q) <= p for some q in H}`` on the target of ``i``."""
    src, tgt = i.source, i.target
    members = frozenset(H)
    if not src.is_generic(members):
        raise NotGenericError(f"{src.format_set(members)} is not generic on {src.name or 'source'}")
    image = tgt.mask(i(q) for q in members)
    return tgt.members(tgt.closure_mask(image))


def filter_correspondence_report(i: PosetMap) -> Report:
    """Generic filters on both sides correspond through ``i`` in both directions."""
    src, tgt = i.source, i.target
    report = Report(f"filter correspondence {src.name or 'source'} -> {tgt.name or 'target'}")
    for H in src.generic_filters():
        G = induced_filter(i, H)
        tag = f"H={src.format_set(H)}"
        report.check(f"{tag} induced generic", tgt.is_generic(G), f"G={tgt.format_set(G)}")
        report.check(
            f"{tag} preimage",
            i.preimage(G) == H,
            f"preimage {src.format_set(i.preimage(G))}",
        )
    for G in tgt.generic_filters():
        H = i.preimage(G)
        tag = f"G={tgt.format_set(G)}"
        generic = src.is_generic(H)
        report.check(f"{tag} preimage generic", generic, f"H={src.format_set(H)}")
        if generic:
            report.check(f"{tag} regenerates", induced_filter(i, H) == G)
    return report


def transported_universe(i: PosetMap, U: NameUniverse) -> NameUniverse:
    memo: dict = {}
    return NameUniverse.closure(i.target, [transport(i, x, memo) for x in U])


def extension_equality_check(
    i: PosetMap,
    U_source: NameUniverse,
    formulas: Iterable[Formula] = (),
) -> Report:
    """Extensions agree across ``i``, and forcing transfers along ``i`` and ``i*``.

    For every generic ``H`` on the source, the extension by ``H`` over
    ``U_source`` equals the extension by the induced filter over the
    transported universe. For each formula ``f`` and source condition ``q``,
    ``q`` forces ``f`` iff ``i(q)`` forces the transported formula.
    """
    src, tgt = i.source, i.target
    U_target = transported_universe(i, U_source)
    report = Report(
        f"extension equality {src.name or 'source'} -> {tgt.name or 'target'} "
        f"(universe rank <= {U_source.rank_bound})"
    )
    for H in src.generic_filters():
        G = induced_filter(i, H)
        left = extension(src, H, U_source)
        right = extension(tgt, G, U_target)
        report.check(
            f"H={src.format_set(H)} extensions",
            set(left.sets) == set(right.sets),
            f"{left.format_sets()} vs {right.format_sets()}",
        )
    formulas = list(formulas)
    if formulas:
        ctx_src = SemanticsContext(src, U_source)
        ctx_tgt = SemanticsContext(tgt, U_target)
        memo: dict = {}
        bad = []
        for f in formulas:
            g = map_constants(f, lambda x: transport(i, x, memo))
            a = ctx_src.forcers_mask(f)
            b = ctx_tgt.forcers_mask(g)
            for k, q in enumerate(src):
                if bool(a >> k & 1) != bool(b >> i.index_map(k) & 1):
                    bad.append((q, f))
        report.check(
            f"forcing transfer over {len(formulas)} formulas x {len(src)} conditions",
            not bad,
            f"first mismatch at q={bad[0][0]}" if bad else "",
        )
    return report


__all__ = [
    "Extension",
    "extension",
    "extension_equality_check",
    "filter_correspondence_report",
    "hf_models",
    "induced_filter",
    "transported_universe",
    "truth_lemma_report",
]
