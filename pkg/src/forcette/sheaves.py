"""Grothendieck topologies on finite posets and the sheaf condition.

A sieve on ``p`` is a down-closed subset of ``down(p)``; internally sieves are
bitmasks over the base poset, as in :mod:`forcette.poset`. A presheaf stores
one value tuple per element and one restriction table per pair ``q <= p``:
``tables[(p, q)][k]`` is the index in ``values(q)`` of the restriction of the
``k``-th value at ``p``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import (
    BasisAxiomError,
    CapExceededError,
    ForcingError,
    HypothesisError,
    PresheafError,
)
from .poset import Poset, PosetMap, bits, popcount, subset_key
from .report import Report
from .ro import RegularOpenAlgebra

SIEVE_CAP = 16
SHEAF_POSET_CAP = 4
SHEAF_CARD_CAP = 2
RELABEL_CAP = 100_000


# -- sieves -------------------------------------------------------------------


@dataclass(frozen=True)
class Sieve:
    at: str
    members: frozenset[str]

    def __contains__(self, q: object) -> bool:
        return q in self.members


def _is_sieve_mask(P: Poset, p: int, mask: int) -> bool:
    if mask & ~P.down_mask(p):
        return False
    return all(P.down_mask(q) & ~mask == 0 for q in bits(mask))


def _sieve_mask(P: Poset, at: str, members: Iterable[str]) -> tuple[int, int]:
    p = P.index(at)
    mask = P.mask(members)
    if not _is_sieve_mask(P, p, mask):
        raise ForcingError(f"{P.format_set(mask)} is not a sieve on {at}")
    return p, mask


def make_sieve(P: Poset, at: str, members: Iterable[str]) -> Sieve:
    _, mask = _sieve_mask(P, at, members)
    return Sieve(at, P.members(mask))


def _linear_extension(P: Poset, mask: int) -> list[int]:
    """Members of ``mask`` with everything below an element listed before it."""
    return sorted(bits(mask), key=lambda i: (popcount(P.down_mask(i)), i))


def down_set_masks(P: Poset, mask: int) -> Iterator[int]:
    """Every down-closed subset of the down-closed set ``mask``."""
    order = _linear_extension(P, mask)

    def extend(k: int, acc: int) -> Iterator[int]:
        if k == len(order):
            yield acc
            return
        i = order[k]
        yield from extend(k + 1, acc)
        below = P.down_mask(i) & ~(1 << i)
        if below & ~acc == 0:
            yield from extend(k + 1, acc | 1 << i)

    yield from extend(0, 0)


def sieve_masks(P: Poset, p: int, cap: int = SIEVE_CAP) -> list[int]:
    down = P.down_mask(p)
    if popcount(down) > cap:
        raise CapExceededError(f"{popcount(down)} elements below {P.elements[p]} exceed cap {cap}")
    return sorted(down_set_masks(P, down), key=subset_key)


def sieves_on(P: Poset, p: str, cap: int = SIEVE_CAP) -> list[Sieve]:
    return [Sieve(p, P.members(m)) for m in sieve_masks(P, P.index(p), cap)]


def pullback_sieve(P: Poset, S: Sieve, q: str) -> Sieve:
    """``S`` restricted to ``down(q)``."""
    _, mask = _sieve_mask(P, S.at, S.members)
    if not P.leq(q, S.at):
        raise ForcingError(f"{q} is not below {S.at}")
    return Sieve(q, P.members(mask & P.down_mask(P.index(q))))


def generated_sieve(P: Poset, at: str, gens: Iterable[str]) -> Sieve:
    """Downward closure of ``gens``, which must lie below ``at``."""
    gens = list(gens)
    for g in gens:
        if not P.leq(g, at):
            raise ForcingError(f"generator {g} is not below {at}")
    acc = 0
    for g in gens:
        acc |= P.down_mask(P.index(g))
    return Sieve(at, P.members(acc))


# -- topologies ---------------------------------------------------------------


class GrothendieckTopology:
    """Covering sieves per element, stored as frozensets of masks."""

    def __init__(self, base: Poset, covers: Sequence[Iterable[int]], name: str = ""):
        if len(covers) != len(base):
            raise ForcingError("one cover set per element is required")
        self.base = base
        self.name = name
        self._covers = tuple(frozenset(c) for c in covers)
        for p, masks in enumerate(self._covers):
            for m in masks:
                if not _is_sieve_mask(base, p, m):
                    raise ForcingError(
                        f"{base.format_set(m)} is not a sieve on {base.elements[p]}"
                    )

    @classmethod
    def from_covers(
        cls, P: Poset, covers: Mapping[str, Iterable[Iterable[str]]], name: str = ""
    ) -> GrothendieckTopology:
        masks: list[set[int]] = [set() for _ in P]
        for p, family in covers.items():
            i = P.index(p)
            for members in family:
                masks[i].add(P.mask(members))
        return cls(P, masks, name)

    def cover_masks(self, i: int) -> frozenset[int]:
        return self._covers[i]

    def covers(self, p: str) -> list[Sieve]:
        masks = sorted(self._covers[self.base.index(p)], key=subset_key)
        return [Sieve(p, self.base.members(m)) for m in masks]

    def is_covering(self, S: Sieve) -> bool:
        return self.base.mask(S.members) in self._covers[self.base.index(S.at)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrothendieckTopology):
            return NotImplemented
        return self.base.elements == other.base.elements and self._covers == other._covers

    def __hash__(self) -> int:
        return hash((self.base.elements, self._covers))

    def differences(self, other: GrothendieckTopology) -> list[str]:
        """Elements whose cover sets differ, with the sieves only one side has."""
        out = []
        P = self.base
        for i, p in enumerate(P):
            mine, theirs = self._covers[i], other._covers[i]
            if mine != theirs:
                extra = ", ".join(P.format_set(m) for m in sorted(mine - theirs, key=subset_key))
                missing = ", ".join(P.format_set(m) for m in sorted(theirs - mine, key=subset_key))
                out.append(f"{p}: only left [{extra}], only right [{missing}]")
        return out

    def format_lines(self) -> list[str]:
        P = self.base
        return [
            f"covers({p}) = "
            + " ".join(P.format_set(m) for m in sorted(self._covers[i], key=subset_key))
            for i, p in enumerate(P)
        ]

    def __repr__(self) -> str:
        label = self.name or "topology"
        return f"<GrothendieckTopology {label} on {self.base.name or 'poset'}>"


def dense_topology(P: Poset, cap: int = SIEVE_CAP) -> GrothendieckTopology:
    covers = [
        [m for m in sieve_masks(P, p, cap) if P.dense_below_mask(m) >> p & 1] for p in range(len(P))
    ]
    return GrothendieckTopology(P, covers, "dense")


def trivial_topology(P: Poset) -> GrothendieckTopology:
    """Only the maximal sieves cover."""
    return GrothendieckTopology(P, [[P.down_mask(p)] for p in range(len(P))], "trivial")


def sup_topology(B: RegularOpenAlgebra, cap: int = SIEVE_CAP) -> GrothendieckTopology:
    """On ``B`` with zero: ``S`` covers ``b`` iff the join of ``S`` is ``b``."""
    P = B.as_poset(include_zero=True)
    to_alg = [B.index(e) for e in P]
    covers = []
    for p in range(len(P)):
        covers.append(
            [m for m in sieve_masks(P, p, cap) if B.join_all(to_alg[q] for q in bits(m)) == to_alg[p]]
        )
    return GrothendieckTopology(P, covers, "sup")


def check_topology_axioms(J: GrothendieckTopology, cap: int = SIEVE_CAP) -> Report:
    """One case per element and axiom: maximal sieve, stability, transitivity."""
    P = J.base
    report = Report(f"topology axioms {J.name or ''} on {P.name or 'poset'}".replace("  ", " "))
    for p, e in enumerate(P):
        covers = J.cover_masks(p)
        report.check(f"maximal {e}", P.down_mask(p) in covers, f"{P.format_set(P.down_mask(p))} missing")
        bad = ""
        for S in sorted(covers, key=subset_key):
            for q in bits(P.down_mask(p)):
                if S & P.down_mask(q) not in J.cover_masks(q):
                    bad = f"{P.format_set(S)} pulled to {P.elements[q]} does not cover"
                    break
            if bad:
                break
        report.check(f"stability {e}", not bad, bad)
        bad = ""
        for R in sieve_masks(P, p, cap):
            if R in covers:
                continue
            for S in sorted(covers, key=subset_key):
                if all(R & P.down_mask(q) in J.cover_masks(q) for q in bits(S)):
                    bad = f"{P.format_set(R)} is locally covered along {P.format_set(S)} but does not cover"
                    break
            if bad:
                break
        report.check(f"transitivity {e}", not bad, bad)
    return report


# -- bases --------------------------------------------------------------------


def _family_masks(P: Poset, basis: Mapping[str, Iterable[Iterable[str]]]) -> list[list[int]]:
    """Generated sieve of each basis family, with the identity family added."""
    out: list[list[int]] = [[] for _ in P]
    for p, families in basis.items():
        i = P.index(p)
        for fam in families:
            members = list(fam)
            for g in members:
                if not P.leq(g, p):
                    raise BasisAxiomError(f"basis family at {p} contains {g}, which is not below {p}")
            acc = 0
            for g in members:
                acc |= P.down_mask(P.index(g))
            out[i].append(acc)
    for i in range(len(P)):
        if P.down_mask(i) not in out[i]:
            out[i].append(P.down_mask(i))
        out[i] = sorted(set(out[i]), key=subset_key)
    return out


def check_basis_axioms(P: Poset, basis: Mapping[str, Iterable[Iterable[str]]]) -> Report:
    """Basis axioms in sieve form: identity, stability by refinement, composition by refinement."""
    gen = _family_masks(P, basis)
    report = Report(f"basis axioms on {P.name or 'poset'}")

    def refined(i: int, mask: int) -> bool:
        return any(R & ~mask == 0 for R in gen[i])

    for p, e in enumerate(P):
        report.check(f"identity {e}", True)
        bad = ""
        for R in gen[p]:
            for q in bits(P.down_mask(p)):
                if not refined(q, R & P.down_mask(q)):
                    bad = f"{P.format_set(R)} pulled to {P.elements[q]} has no refining basis family"
                    break
            if bad:
                break
        report.check(f"stability {e}", not bad, bad)
        bad = ""
        for R in gen[p]:
            tops = [r for r in bits(R)]
            for choice in itertools.product(*(gen[r] for r in tops)):
                acc = 0
                for m in choice:
                    acc |= m
                if not refined(p, acc):
                    bad = f"composite through {P.format_set(R)} has no refining basis family"
                    break
            if bad:
                break
        report.check(f"transitivity {e}", not bad, bad)
    return report


def basis_to_topology(
    P: Poset, basis: Mapping[str, Iterable[Iterable[str]]], cap: int = SIEVE_CAP
) -> GrothendieckTopology:
    """``S`` covers ``p`` iff it contains the sieve generated by a basis family at ``p``."""
    basis = {p: [list(f) for f in fams] for p, fams in basis.items()}
    report = check_basis_axioms(P, basis)
    if not report.ok:
        raise BasisAxiomError("; ".join(f"{c.label}: {c.detail}" for c in report.failures))
    gen = _family_masks(P, basis)
    covers = [
        [S for S in sieve_masks(P, p, cap) if any(R & ~S == 0 for R in gen[p])]
        for p in range(len(P))
    ]
    return GrothendieckTopology(P, covers, "basis")


def sup_basis(B: RegularOpenAlgebra) -> dict[str, list[list[str]]]:
    """Families below each ``b`` whose join is ``b``."""
    P = B.as_poset(include_zero=True)
    out: dict[str, list[list[str]]] = {}
    for p, e in enumerate(P):
        below = list(bits(P.down_mask(p)))
        fams = []
        for r in range(len(below) + 1):
            for combo in itertools.combinations(below, r):
                if B.join_all(B.index(P.elements[q]) for q in combo) == B.index(e):
                    fams.append([P.elements[q] for q in combo])
        out[e] = fams
    return out


def sup_dense_agreement(B: RegularOpenAlgebra, cap: int = SIEVE_CAP) -> Report:
    """On ``B`` minus zero: a sieve is dense below ``b`` iff its generated sieve in ``B`` joins to ``b``."""
    Q = B.as_poset(include_zero=False)
    report = Report(f"dense versus sup sieves on {Q.name or 'algebra'}")
    for p, e in enumerate(Q):
        bad = []
        masks = sieve_masks(Q, p, cap)
        for S in masks:
            dense = bool(Q.dense_below_mask(S) >> p & 1)
            joined = B.join_all(B.index(Q.elements[q]) for q in bits(S)) == B.index(e)
            if dense != joined:
                bad.append(Q.format_set(S))
        report.check(f"{e} ({len(masks)} sieves)", not bad, ", ".join(bad))
    return report


# -- induced topologies -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InducedTopologyCertificate:
    morphism: PosetMap
    source_topology: GrothendieckTopology
    target_topology: GrothendieckTopology
    witnesses: Mapping[str, tuple[tuple[frozenset[str], frozenset[str]], ...]] = field(repr=False)

    def format_lines(self) -> list[str]:
        src = self.morphism.source
        out = []
        for d, entries in self.witnesses.items():
            for C, E in entries:
                out.append(f"at {d}: family {src.format_set(C)} refined by {src.format_set(E)}")
        return out


def _image_sieve(i: PosetMap, mask: int) -> int:
    tgt = i.target
    acc = 0
    for q in bits(mask):
        acc |= tgt.down_mask(i.index_map(q))
    return acc


def check_induced_hypothesis(
    i: PosetMap, J: GrothendieckTopology, family_cap: int = 16
) -> dict[str, tuple[tuple[frozenset[str], frozenset[str]], ...]]:
    """Witnesses for the finite-family hypothesis, or :class:`HypothesisError`.

    For a target ``d`` and source elements ``C`` with ``d <= i(c)``, the
    largest admissible family is ``E = {e : i(e) <= d and e <= c for c in C}``;
    since covers are closed upwards, the hypothesis holds iff ``<i(E)>`` covers ``d``.
    """
    src, tgt = i.source, i.target
    if J.base is not tgt and J.base.elements != tgt.elements:
        raise ForcingError("topology is not on the target of the map")
    witnesses = {}
    for d, e_d in enumerate(tgt):
        above = [c for c in range(len(src)) if tgt.down_mask(i.index_map(c)) >> d & 1]
        if len(above) > family_cap:
            raise CapExceededError(f"{len(above)} source elements above {e_d} exceed cap {family_cap}")
        below_d = sum(1 << e for e in range(len(src)) if tgt.down_mask(d) >> i.index_map(e) & 1)
        entries = []
        for r in range(len(above) + 1):
            for combo in itertools.combinations(above, r):
                E = below_d
                for c in combo:
                    E &= src.down_mask(c)
                if _image_sieve(i, E) not in J.cover_masks(d):
                    raise HypothesisError(
                        f"at target element {e_d}: family {src.format_set(sum(1 << c for c in combo))} "
                        f"admits no covering refinement"
                    )
                entries.append((src.members(sum(1 << c for c in combo)), src.members(E)))
        witnesses[e_d] = tuple(entries)
    return witnesses


def induced_topology(
    i: PosetMap, J: GrothendieckTopology, cap: int = SIEVE_CAP
) -> tuple[GrothendieckTopology, InducedTopologyCertificate]:
    """``S`` covers ``c`` iff the sieve generated by ``i(S)`` covers ``i(c)``."""
    witnesses = check_induced_hypothesis(i, J)
    src = i.source
    covers = [
        [S for S in sieve_masks(src, c, cap) if _image_sieve(i, S) in J.cover_masks(i.index_map(c))]
        for c in range(len(src))
    ]
    induced = GrothendieckTopology(src, covers, f"induced from {J.name}" if J.name else "induced")
    return induced, InducedTopologyCertificate(i, induced, J, witnesses)


# -- presheaves ---------------------------------------------------------------


class Presheaf:
    """Finite value sets with functorial restriction tables along ``q <= p``."""

    def __init__(
        self,
        base: Poset,
        values: Sequence[Sequence[str]],
        tables: Mapping[tuple[int, int], Sequence[int]],
    ):
        self.base = base
        self.values = tuple(tuple(v) for v in values)
        self.tables = {k: tuple(t) for k, t in tables.items()}
        self._validate()

    def _validate(self) -> None:
        P = self.base
        if len(self.values) != len(P):
            raise PresheafError("one value set per element is required")
        for k, vals in enumerate(self.values):
            if len(set(vals)) != len(vals):
                raise PresheafError(f"duplicate values at {P.elements[k]}")
        for p in range(len(P)):
            for q in bits(P.down_mask(p)):
                t = self.tables.get((p, q))
                if t is None:
                    raise PresheafError(f"missing restriction {P.elements[p]} -> {P.elements[q]}")
                if len(t) != len(self.values[p]) or any(
                    not 0 <= x < len(self.values[q]) for x in t
                ):
                    raise PresheafError(f"ill-typed restriction {P.elements[p]} -> {P.elements[q]}")
            if self.tables[(p, p)] != tuple(range(len(self.values[p]))):
                raise PresheafError(f"restriction {P.elements[p]} -> {P.elements[p]} is not the identity")
        for p in range(len(P)):
            for q in bits(P.down_mask(p)):
                for r in bits(P.down_mask(q)):
                    pq, qr, pr = self.tables[(p, q)], self.tables[(q, r)], self.tables[(p, r)]
                    if any(qr[pq[x]] != pr[x] for x in range(len(pq))):
                        raise PresheafError(
                            f"restrictions {P.elements[p]} -> {P.elements[q]} -> {P.elements[r]} "
                            f"do not compose to {P.elements[p]} -> {P.elements[r]}"
                        )

    @classmethod
    def from_edges(
        cls,
        P: Poset,
        values: Mapping[str, Sequence[str]],
        restrictions: Mapping[tuple[str, str], Mapping[str, str]],
    ) -> Presheaf:
        """Close restrictions given on some pairs ``(from, to)`` under composition."""
        vals = []
        for p in P:
            vs = values.get(p, ())
            vals.append(tuple(vs))
        lookup = [{v: k for k, v in enumerate(vs)} for vs in vals]
        edges: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
        for (a, b), table in restrictions.items():
            p, q = P.index(a), P.index(b)
            if not P.down_mask(p) >> q & 1:
                raise PresheafError(f"restriction {a} -> {b} but {b} is not below {a}")
            row = []
            for v in vals[p]:
                if v not in table:
                    raise PresheafError(f"restriction {a} -> {b} is undefined at {v}")
                w = table[v]
                if w not in lookup[q]:
                    raise PresheafError(f"restriction {a} -> {b} sends {v} to {w}, not a value at {b}")
                row.append(lookup[q][w])
            extra = set(table) - set(vals[p])
            if extra:
                raise PresheafError(f"restriction {a} -> {b} mentions unknown values {sorted(extra)}")
            edges.setdefault(p, []).append((q, tuple(row)))
        tables: dict[tuple[int, int], tuple[int, ...]] = {}
        work = []
        for p in range(len(P)):
            tables[(p, p)] = tuple(range(len(vals[p])))
            work.append((p, p))
        while work:
            p, q = work.pop()
            t = tables[(p, q)]
            for r, g in edges.get(q, ()):
                comp = tuple(g[x] for x in t)
                known = tables.get((p, r))
                if known is None:
                    tables[(p, r)] = comp
                    work.append((p, r))
                elif known != comp:
                    raise PresheafError(
                        f"restrictions {P.elements[p]} -> {P.elements[r]} disagree along different paths"
                    )
        return cls(P, vals, tables)

    def value_set(self, p: str) -> tuple[str, ...]:
        return self.values[self.base.index(p)]

    def restriction(self, p: str, q: str) -> dict[str, str]:
        i, j = self.base.index(p), self.base.index(q)
        t = self.tables.get((i, j))
        if t is None:
            raise PresheafError(f"{q} is not below {p}")
        return {v: self.values[j][t[k]] for k, v in enumerate(self.values[i])}

    def restrict(self, p: str, q: str, x: str) -> str:
        return self.restriction(p, q)[x]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.values)

    def format_lines(self) -> list[str]:
        P = self.base
        out = [f"set {p} = {' '.join(self.values[k])}".rstrip() for k, p in enumerate(P)]
        for a, b in P.hasse_edges():
            table = self.restriction(b, a)
            body = " ".join(f"{v}->{w}" for v, w in table.items())
            out.append(f"map {b} {a} : {body}".rstrip())
        return out

    def __repr__(self) -> str:
        return f"<Presheaf on {self.base.name or 'poset'} sizes={self.sizes()}>"


def constant_presheaf(P: Poset, values: Sequence[str]) -> Presheaf:
    ident = tuple(range(len(values)))
    tables = {(p, q): ident for p in range(len(P)) for q in bits(P.down_mask(p))}
    return Presheaf(P, [tuple(values)] * len(P), tables)


def representable_presheaf(P: Poset, p: str) -> Presheaf:
    """One point over ``down(p)``, empty elsewhere."""
    down = P.down_mask(P.index(p))
    vals = [("*",) if down >> q & 1 else () for q in range(len(P))]
    tables = {
        (a, b): tuple(0 for _ in vals[a]) for a in range(len(P)) for b in bits(P.down_mask(a))
    }
    return Presheaf(P, vals, tables)


def pullback_presheaf(i: PosetMap, H: Presheaf) -> Presheaf:
    """``H`` composed with ``i``."""
    src, tgt = i.source, i.target
    if H.base is not tgt and H.base.elements != tgt.elements:
        raise PresheafError("presheaf does not live on the target of the map")
    vals = [H.values[i.index_map(p)] for p in range(len(src))]
    tables = {}
    for p in range(len(src)):
        for q in bits(src.down_mask(p)):
            key = (i.index_map(p), i.index_map(q))
            if key not in H.tables:
                raise PresheafError(f"map is not monotone at {src.elements[q]} <= {src.elements[p]}")
            tables[(p, q)] = H.tables[key]
    return Presheaf(src, vals, tables)


# -- the sheaf condition ------------------------------------------------------


@dataclass(frozen=True)
class SheafCounterexample:
    at: str
    sieve: tuple[str, ...]
    family: tuple[tuple[str, str], ...]
    amalgamations: tuple[str, ...]

    def __str__(self) -> str:
        fam = ", ".join(f"{q}:{x}" for q, x in self.family)
        amal = ", ".join(self.amalgamations) or "none"
        return (
            f"sieve {{{','.join(self.sieve)}}} on {self.at}: matching family "
            f"{{{fam}}} has {len(self.amalgamations)} amalgamations ({amal})"
        )


def matching_families(F: Presheaf, sieve: int) -> Iterator[dict[int, int]]:
    """Every matching family on the sieve mask, as element index to value index."""
    P = F.base
    order = _linear_extension(P, sieve)[::-1]
    chosen: dict[int, int] = {}

    def consistent(r: int, x: int) -> bool:
        for q, y in chosen.items():
            if P.down_mask(q) >> r & 1 and F.tables[(q, r)][y] != x:
                return False
            if P.down_mask(r) >> q & 1 and F.tables[(r, q)][x] != y:
                return False
        return True

    def extend(k: int) -> Iterator[dict[int, int]]:
        if k == len(order):
            yield dict(chosen)
            return
        r = order[k]
        forced = next((F.tables[(q, r)][y] for q, y in chosen.items() if P.down_mask(q) >> r & 1), None)
        options = range(len(F.values[r])) if forced is None else (forced,)
        for x in options:
            if consistent(r, x):
                chosen[r] = x
                yield from extend(k + 1)
                del chosen[r]

    yield from extend(0)


def amalgamations(F: Presheaf, p: int, family: Mapping[int, int]) -> list[int]:
    return [
        x
        for x in range(len(F.values[p]))
        if all(F.tables[(p, q)][x] == y for q, y in family.items())
    ]


def is_sheaf(F: Presheaf, J: GrothendieckTopology) -> tuple[bool, SheafCounterexample | None]:
    P = F.base
    if J.base is not P and J.base.elements != P.elements:
        raise ForcingError("presheaf and topology live on different posets")
    for p in range(len(P)):
        for S in sorted(J.cover_masks(p), key=subset_key):
            for fam in matching_families(F, S):
                found = amalgamations(F, p, fam)
                if len(found) != 1:
                    return False, SheafCounterexample(
                        P.elements[p],
                        P.ordered(S),
                        tuple((P.elements[q], F.values[q][fam[q]]) for q in sorted(fam)),
                        tuple(F.values[p][x] for x in found),
                    )
    return True, None


# -- bounded enumeration ------------------------------------------------------


def canonical_key(F: Presheaf) -> tuple:
    """Isomorphism invariant: sizes and the least relabeled table listing."""
    sizes = F.sizes()
    n_perm = 1
    for s in sizes:
        for k in range(2, s + 1):
            n_perm *= k
    if n_perm > RELABEL_CAP:
        raise CapExceededError(f"{n_perm} relabelings exceed cap {RELABEL_CAP}")
    pairs = sorted(k for k in F.tables if k[0] != k[1])
    best = None
    for perms in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
        inverse = [sorted(range(len(pm)), key=pm.__getitem__) for pm in perms]
        listing = tuple(
            tuple(perms[q][F.tables[(p, q)][inverse[p][x]]] for x in range(sizes[p]))
            for p, q in pairs
        )
        if best is None or listing < best:
            best = listing
    return (sizes, best)


def _presheaf_from_key(P: Poset, key: tuple) -> Presheaf:
    sizes, listing = key
    pairs = sorted((p, q) for p in range(len(P)) for q in bits(P.down_mask(p)) if p != q)
    tables = dict(zip(pairs, listing))
    for p in range(len(P)):
        tables[(p, p)] = tuple(range(sizes[p]))
    return Presheaf(P, [tuple(str(k) for k in range(s)) for s in sizes], tables)


def _close_hasse(P: Poset, order: list[int], covers_below: list[list[int]], sizes, edge) -> dict | None:
    """All restriction tables from Hasse-edge tables, or None if some square fails to commute."""
    tables: dict[tuple[int, int], tuple[int, ...]] = {}
    for p in order:
        tables[(p, p)] = tuple(range(sizes[p]))
        for q in bits(P.down_mask(p) & ~(1 << p)):
            value = None
            for m in covers_below[p]:
                if not P.down_mask(m) >> q & 1:
                    continue
                first, rest = edge[(p, m)], tables[(m, q)]
                comp = tuple(rest[x] for x in first)
                if value is None:
                    value = comp
                elif value != comp:
                    return None
            tables[(p, q)] = value
    return tables


def enumerate_sheaves(
    P: Poset,
    J: GrothendieckTopology,
    max_card: int = 2,
    poset_cap: int = SHEAF_POSET_CAP,
    card_cap: int = SHEAF_CARD_CAP,
) -> list[Presheaf]:
    """One representative per isomorphism class of sheaves with values of size at most ``max_card``."""
    if len(P) > poset_cap:
        raise CapExceededError(f"{len(P)} elements exceed sheaf enumeration cap {poset_cap}")
    if max_card > card_cap:
        raise CapExceededError(f"value cardinality {max_card} exceeds cap {card_cap}")
    if not P.is_antisymmetric():
        raise ForcingError("sheaf enumeration needs a partial order")
    order = _linear_extension(P, P.full)
    hasse = [(P.index(b), P.index(a)) for a, b in P.hasse_edges()]
    covers_below = [[m for (p, m) in hasse if p == k] for k in range(len(P))]
    found: dict[tuple, None] = {}
    for sizes in itertools.product(range(max_card + 1), repeat=len(P)):
        choices = [itertools.product(range(sizes[m]), repeat=sizes[p]) for p, m in hasse]
        for tabs in itertools.product(*choices):
            edge = dict(zip(hasse, tabs))
            tables = _close_hasse(P, order, covers_below, sizes, edge)
            if tables is None:
                continue
            F = Presheaf.__new__(Presheaf)
            F.base = P
            F.values = tuple(tuple(str(k) for k in range(s)) for s in sizes)
            F.tables = tables
            if is_sheaf(F, J)[0]:
                found.setdefault(canonical_key(F), None)
    return [_presheaf_from_key(P, k) for k in sorted(found)]


def natural_transformations(F: Presheaf, G: Presheaf) -> list[tuple[tuple[int, ...], ...]]:
    """Each transformation as one component table per element."""
    P = F.base
    if G.base is not P and G.base.elements != P.elements:
        raise ForcingError("presheaves live on different posets")
    order = _linear_extension(P, P.full)[::-1]
    comps: dict[int, tuple[int, ...]] = {}
    out = []

    def extend(k: int) -> None:
        if k == len(order):
            out.append(tuple(comps[p] for p in range(len(P))))
            return
        p = order[k]
        for eta in itertools.product(range(len(G.values[p])), repeat=len(F.values[p])):
            ok = True
            for q, theta in comps.items():
                if P.down_mask(q) >> p & 1:
                    f, g = F.tables[(q, p)], G.tables[(q, p)]
                    if any(eta[f[x]] != g[theta[x]] for x in range(len(f))):
                        ok = False
                        break
                if P.down_mask(p) >> q & 1:
                    f, g = F.tables[(p, q)], G.tables[(p, q)]
                    if any(theta[f[x]] != g[eta[x]] for x in range(len(f))):
                        ok = False
                        break
            if ok:
                comps[p] = eta
                extend(k + 1)
                del comps[p]

    extend(0)
    return out


def equivalence_report(
    i: PosetMap,
    J_source: GrothendieckTopology,
    J_target: GrothendieckTopology,
    max_card: int = 2,
) -> Report:
    """Bounded check that pulling back along ``i`` is an equivalence of sheaf categories.

    Within value sets of size at most ``max_card``, pullback must send sheaves
    to sheaves and act bijectively on hom-sets. Every source sheaf class must
    also arise as a pullback.
    """
    src, tgt = i.source, i.target
    report = Report(
        f"sheaf equivalence {src.name or 'source'} -> {tgt.name or 'target'} (max card {max_card})"
    )
    try:
        induced, _ = induced_topology(i, J_target)
        report.check("induced topology equals source topology", induced == J_source,
                     "; ".join(induced.differences(J_source)))
    except HypothesisError as exc:
        report.check("induced topology hypothesis", False, str(exc))
    upstairs = enumerate_sheaves(tgt, J_target, max_card)
    downstairs = enumerate_sheaves(src, J_source, max_card)
    pulled = [pullback_presheaf(i, H) for H in upstairs]
    bad = [k for k, F in enumerate(pulled) if not is_sheaf(F, J_source)[0]]
    report.check(
        f"pullback preserves sheaves ({len(upstairs)} target classes)",
        not bad,
        f"class {bad[0]} sizes {upstairs[bad[0]].sizes()}" if bad else "",
    )
    bad_hom = ""
    pairs = 0
    for a, H1 in enumerate(upstairs):
        for b, H2 in enumerate(upstairs):
            pairs += 1
            top = natural_transformations(H1, H2)
            bottom = natural_transformations(pulled[a], pulled[b])
            image = {tuple(eta[i.index_map(p)] for p in range(len(src))) for eta in top}
            if len(image) != len(top) or image != set(bottom):
                bad_hom = f"classes ({a}, {b}): {len(top)} upstairs, {len(bottom)} downstairs, {len(image)} images"
                break
        if bad_hom:
            break
    report.check(f"hom-set bijection over {pairs} pairs", not bad_hom, bad_hom)
    hit = {canonical_key(F) for F in pulled}
    down_keys = [canonical_key(F) for F in downstairs]
    missing = [k for k, key in enumerate(down_keys) if key not in hit]
    report.check(
        f"essential surjectivity ({len(downstairs)} source classes)",
        not missing,
        f"class sizes {downstairs[missing[0]].sizes()} not hit" if missing else "",
    )
    report.check(
        "class counts agree",
        len(upstairs) == len(downstairs) == len(hit),
        f"{len(upstairs)} target, {len(downstairs)} source, {len(hit)} distinct pullbacks",
    )
    report.note(f"{len(upstairs)} target classes, {len(downstairs)} source classes")
    return report


__all__ = [
    "GrothendieckTopology",
    "InducedTopologyCertificate",
    "Presheaf",
    "SheafCounterexample",
    "Sieve",
    "amalgamations",
    "basis_to_topology",
    "canonical_key",
    "check_basis_axioms",
    "check_induced_hypothesis",
    "check_topology_axioms",
    "constant_presheaf",
    "dense_topology",
    "down_set_masks",
    "enumerate_sheaves",
    "equivalence_report",
    "generated_sieve",
    "induced_topology",
    "is_sheaf",
    "make_sieve",
    "matching_families",
    "natural_transformations",
    "pullback_presheaf",
    "pullback_sieve",
    "representable_presheaf",
    "sieve_masks",
    "sieves_on",
    "sup_basis",
    "sup_dense_agreement",
    "sup_topology",
    "trivial_topology",
]
