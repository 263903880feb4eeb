"""Regular-open completion of a finite poset and finite Boolean algebra arithmetic.

The topology on a poset is the one generated by the cones ``{q : q <= p}``;
its open sets are exactly the down-closed subsets and its closed sets the
up-closed ones.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence

from .errors import ForcingError, UnknownElementError
from .poset import DEFAULT_CAP, Poset, PosetMap, bits, subset_key
from .report import Report


def open_masks(P: Poset, cap: int = DEFAULT_CAP) -> list[int]:
    P.check_cap(cap)
    opens = {0}
    for i in range(len(P)):
        cone = P.down_mask(i)
        opens |= {o | cone for o in opens}
    return sorted(opens, key=subset_key)


def open_sets(P: Poset, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
    """All unions of cones, the empty union included."""
    return [P.members(m) for m in open_masks(P, cap)]


def interior(P: Poset, subset: Iterable[str]) -> frozenset[str]:
    return P.members(P.interior_mask(P.mask(subset)))


def closure(P: Poset, subset: Iterable[str]) -> frozenset[str]:
    return P.members(P.closure_mask(P.mask(subset)))


class BooleanAlgebra:
    """A finite Boolean algebra given by explicit operation tables.

    Elements are referred to by index into ``labels``. Tables are taken as
    given; :func:`ba_laws_report` is what establishes that they are lawful.
    """

    def __init__(
        self,
        labels: Sequence[str],
        zero: int,
        one: int,
        meet: Sequence[Sequence[int]],
        join: Sequence[Sequence[int]],
        complement: Sequence[int],
    ):
        self.labels = tuple(labels)
        self.zero = zero
        self.one = one
        self._meet = tuple(tuple(row) for row in meet)
        self._join = tuple(tuple(row) for row in join)
        self._complement = tuple(complement)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} of {len(self)} elements>"

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise UnknownElementError(label, "algebra carrier") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def meet(self, u: int, v: int) -> int:
        return self._meet[u][v]

    def join(self, u: int, v: int) -> int:
        return self._join[u][v]

    def complement(self, u: int) -> int:
        return self._complement[u]

    def leq(self, u: int, v: int) -> bool:
        return self._meet[u][v] == u

    def join_all(self, family: Iterable[int]) -> int:
        acc = self.zero
        for u in family:
            acc = self._join[acc][u]
        return acc

    def meet_all(self, family: Iterable[int]) -> int:
        acc = self.one
        for u in family:
            acc = self._meet[acc][u]
        return acc

    def atoms(self) -> list[int]:
        nonzero = [u for u in range(len(self)) if u != self.zero]
        return [
            u for u in nonzero if not any(v != u and self.leq(v, u) for v in nonzero)
        ]

    def with_tables(self, meet=None, join=None, complement=None) -> BooleanAlgebra:
        """A plain table algebra sharing labels, with some tables replaced."""
        return BooleanAlgebra(
            self.labels,
            self.zero,
            self.one,
            meet if meet is not None else self._meet,
            join if join is not None else self._join,
            complement if complement is not None else self._complement,
        )


class RegularOpenAlgebra(BooleanAlgebra):
    """The complete Boolean algebra of regular open subsets of a finite poset."""

    def __init__(self, base: Poset, cap: int = DEFAULT_CAP):
        self.base = base
        self._intcl_cache: dict[int, int] = {}
        carrier = [m for m in open_masks(base, cap) if self.intcl(m) == m]
        self.masks: tuple[int, ...] = tuple(carrier)
        self._mask_index = {m: i for i, m in enumerate(self.masks)}
        n = len(carrier)
        full = base.full
        meet = [[self._mask_index[a & b] for b in carrier] for a in carrier]
        join = [[self._mask_index[self.intcl(a | b)] for b in carrier] for a in carrier]
        comp = [self._mask_index[full & ~base.closure_mask(a)] for a in carrier]
        super().__init__(
            [base.format_set(m) for m in carrier],
            self._mask_index[0],
            self._mask_index[full],
            meet,
            join,
            comp,
        )
        assert n == len(self.labels)
        self._posets: dict[bool, Poset] = {}

    def intcl(self, mask: int) -> int:
        hit = self._intcl_cache.get(mask)
        if hit is None:
            hit = self.base.interior_mask(self.base.closure_mask(mask))
            self._intcl_cache[mask] = hit
        return hit

    def element(self, u: int) -> frozenset[str]:
        return self.base.members(self.masks[u])

    @property
    def carrier(self) -> list[frozenset[str]]:
        return [self.element(u) for u in range(len(self))]

    def index_of_mask(self, mask: int) -> int:
        try:
            return self._mask_index[mask]
        except KeyError:
            raise ForcingError(
                f"{self.base.format_set(mask)} is not a regular open set"
            ) from None

    def find(self, subset: Iterable[str]) -> int:
        return self.index_of_mask(self.base.mask(subset))

    def join_all(self, family: Iterable[int]) -> int:
        union = 0
        for u in family:
            union |= self.masks[u]
        return self._mask_index[self.intcl(union)]

    def meet_all(self, family: Iterable[int]) -> int:
        inter = self.base.full
        for u in family:
            inter &= self.masks[u]
        return self._mask_index[inter]

    def as_poset(self, include_zero: bool = False) -> Poset:
        """The carrier (optionally without zero) ordered by inclusion.

        Element identifiers are the printed forms of the regular open sets.
        """
        if include_zero not in self._posets:
            keep = [u for u in range(len(self)) if include_zero or u != self.zero]
            order = [
                (self.labels[u], self.labels[v])
                for u in keep
                for v in keep
                if self.masks[u] & ~self.masks[v] == 0
            ]
            suffix = "" if include_zero else "\\{0}"
            name = f"RO({self.base.name}){suffix}" if self.base.name else f"RO{suffix}"
            self._posets[include_zero] = Poset(
                [self.labels[u] for u in keep], order, self.labels[self.one], name=name
            )
        return self._posets[include_zero]

    def cone_value(self, p: str) -> int:
        """Index of ``int(cl(down(p)))``."""
        return self._mask_index[self.intcl(self.base.down_mask(self.base.index(p)))]


def ro_algebra(P: Poset, cap: int = DEFAULT_CAP) -> RegularOpenAlgebra:
    return RegularOpenAlgebra(P, cap)


def canonical_morphism(P: Poset, algebra: RegularOpenAlgebra | None = None) -> PosetMap:
    """``p -> int(cl(down(p)))`` into the algebra minus its zero."""
    B = algebra if algebra is not None else ro_algebra(P)
    if B.base is not P:
        raise ForcingError("algebra is not the completion of this poset")
    target = B.as_poset(include_zero=False)
    return PosetMap(P, target, {p: B.labels[B.cone_value(p)] for p in P})


def inclusion_morphism(B: RegularOpenAlgebra) -> PosetMap:
    """The inclusion of ``B`` minus zero into ``B``."""
    small, big = B.as_poset(False), B.as_poset(True)
    return PosetMap(small, big, {p: p for p in small})


def ba_laws_report(B: BooleanAlgebra) -> Report:
    """Check every Boolean algebra axiom instance over all pairs and triples.

    One case per axiom; a failing case carries its first counterexample.
    """
    lab = B.labels
    idx = range(len(B))
    j, m, c = B.join, B.meet, B.complement
    pairs = list(itertools.product(idx, repeat=2))
    triples = list(itertools.product(idx, repeat=3))
    laws = [
        ("u+v = v+u", pairs, lambda u, v: j(u, v) == j(v, u)),
        ("u.v = v.u", pairs, lambda u, v: m(u, v) == m(v, u)),
        ("u+(v+w) = (u+v)+w", triples, lambda u, v, w: j(u, j(v, w)) == j(j(u, v), w)),
        ("u.(v.w) = (u.v).w", triples, lambda u, v, w: m(u, m(v, w)) == m(m(u, v), w)),
        ("u.(u+v) = u", pairs, lambda u, v: m(u, j(u, v)) == u),
        ("u+(u.v) = u", pairs, lambda u, v: j(u, m(u, v)) == u),
        (
            "u.(v+w) = u.v+u.w",
            triples,
            lambda u, v, w: m(u, j(v, w)) == j(m(u, v), m(u, w)),
        ),
        (
            "u+(v.w) = (u+v).(u+w)",
            triples,
            lambda u, v, w: j(u, m(v, w)) == m(j(u, v), j(u, w)),
        ),
        ("u+(-u) = 1", [(u,) for u in idx], lambda u: j(u, c(u)) == B.one),
        ("u.(-u) = 0", [(u,) for u in idx], lambda u: m(u, c(u)) == B.zero),
    ]
    report = Report("boolean-algebra laws")
    for name, instances, law in laws:
        bad = next((args for args in instances if not law(*args)), None)
        if bad is None:
            report.check(name, True)
        else:
            names = "uvw"
            at = ", ".join(f"{names[k]}={lab[a]}" for k, a in enumerate(bad))
            report.check(name, False, f"fails at {at}")
    return report
