"""Names over a forcing poset and the maps between them.

A :class:`Name` is a finite set of ``(name, condition)`` pairs, where the
condition is an element identifier of whatever poset the name lives over.
Names are hash-consed: structurally equal names are the same object, so
equality and hashing are by identity.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import CapExceededError, NotFunctionalError, UnknownElementError
from .poset import Poset, PosetMap
from .ro import RegularOpenAlgebra

DEFAULT_MAX_NAMES = 4096


class Name:
    __slots__ = ("pairs", "rank", "key", "dom", "_functional", "_str")

    # Insert-if-absent through dict.setdefault, which is atomic under the GIL.
    _table: dict[tuple, Name] = {}

    def __new__(cls, pairs: Iterable[tuple[Name, str]] = ()):
        canon = []
        for child, cond in set(pairs):
            if not isinstance(child, Name) or not isinstance(cond, str):
                raise TypeError(f"name pairs must be (Name, str), got ({child!r}, {cond!r})")
            canon.append((child, cond))
        canon.sort(key=lambda pr: (pr[0].key, pr[1]))
        canon = tuple(canon)
        hit = cls._table.get(canon)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.pairs = canon
        self.rank = 1 + max((c.rank for c, _ in canon), default=-1)
        self.key = (self.rank, tuple((c.key, p) for c, p in canon))
        dom = []
        for c, _ in canon:
            if not dom or dom[-1] is not c:
                dom.append(c)
        self.dom = tuple(dom)
        self._functional = None
        self._str = None
        return cls._table.setdefault(canon, self)

    def __reduce__(self):
        return (Name, (self.pairs,))

    @property
    def is_functional(self) -> bool:
        if self._functional is None:
            self._functional = len(self.dom) == len(self.pairs) and all(
                c.is_functional for c in self.dom
            )
        return self._functional

    def conditions(self, child: Name) -> tuple[str, ...]:
        return tuple(p for c, p in self.pairs if c is child)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[Name, str]]:
        return iter(self.pairs)

    def __str__(self) -> str:
        if self._str is None:
            self._str = "{" + ",".join(f"({c},{p})" for c, p in self.pairs) + "}"
        return self._str

    def __repr__(self) -> str:
        return f"Name({self})"


EMPTY = Name()


def name_of(*pairs: tuple[Name, str]) -> Name:
    return Name(pairs)


def is_functional(x: Name) -> bool:
    return x.is_functional


def constituents(x: Name) -> list[Name]:
    """``x`` and every name reachable through first components."""
    seen: dict[Name, None] = {}
    stack = [x]
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen[y] = None
        stack.extend(y.dom)
    return list(seen)


class HFSet(frozenset):
    """A hereditarily finite set; equality is extensional."""

    def __new__(cls, members: Iterable[HFSet] = ()):
        return super().__new__(cls, members)

    @property
    def rank(self) -> int:
        return 1 + max((m.rank for m in self), default=-1)

    def sorted_members(self) -> list[HFSet]:
        return sorted(self, key=lambda m: (m.rank, str(m)))

    def __str__(self) -> str:
        return "{" + ",".join(str(m) for m in self.sorted_members()) + "}"

    def __repr__(self) -> str:
        return f"HFSet({self})"


HF_EMPTY = HFSet()


@dataclass(frozen=True, eq=False)
class NameUniverse:
    """A finite, membership-closed family of names over ``poset``."""

    poset: Poset
    names: tuple[Name, ...]
    rank_bound: int

    @classmethod
    def closure(cls, poset: Poset, names: Iterable[Name]) -> NameUniverse:
        found: dict[Name, None] = {}
        for x in names:
            for y in constituents(x):
                found[y] = None
        for y in found:
            for _, p in y.pairs:
                if p not in poset:
                    raise UnknownElementError(p, poset.name or "poset")
        ordered = tuple(sorted(found, key=lambda y: y.key))
        return cls(poset, ordered, max((y.rank for y in ordered), default=0))

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.names))

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[Name]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def functional(self) -> tuple[Name, ...]:
        return tuple(x for x in self.names if x.is_functional)

    def union(self, names: Iterable[Name]) -> NameUniverse:
        return NameUniverse.closure(self.poset, [*self.names, *names])


def name_count(P: Poset, rank: int) -> int:
    """Number of names of rank at most ``rank`` over ``P``."""
    count = 1
    for _ in range(rank):
        count = 2 ** (count * len(P))
    return count


def enumerate_names(
    P: Poset, rank: int, max_count: int = DEFAULT_MAX_NAMES
) -> NameUniverse:
    """All names of rank at most ``rank`` over ``P``, in canonical order."""
    projected = 1
    for _ in range(rank):
        exponent = projected * len(P)
        if exponent > max_count.bit_length():
            raise CapExceededError(
                f"names of rank <= {rank} over {len(P)} conditions exceed {max_count}"
            )
        projected = 2**exponent
    if projected > max_count:
        raise CapExceededError(f"{projected} names exceed max_count {max_count}")
    level = [EMPTY]
    for _ in range(rank):
        pairs = [(y, p) for y in level for p in P]
        level = [
            Name(itertools.compress(pairs, bits_of(k, len(pairs))))
            for k in range(2 ** len(pairs))
        ]
    return NameUniverse.closure(P, level)


def bits_of(k: int, width: int) -> list[bool]:
    return [bool(k >> j & 1) for j in range(width)]


def transport(i: PosetMap, x: Name, _memo: dict | None = None) -> Name:
    """Replace every condition ``q`` by ``i(q)``, recursively."""
    memo = {} if _memo is None else _memo
    hit = memo.get(x)
    if hit is None:
        hit = Name((transport(i, y, memo), i(q)) for y, q in x.pairs)
        memo[x] = hit
    return hit


def retract(B: RegularOpenAlgebra, x: Name, _memo: dict | None = None) -> Name:
    """Collapse ``x`` to a functional name, joining the conditions of identified constituents."""
    memo = {} if _memo is None else _memo
    hit = memo.get(x)
    if hit is not None:
        return hit
    groups: dict[Name, list[int]] = {}
    for y, p in x.pairs:
        groups.setdefault(retract(B, y, memo), []).append(B.index(p))
    hit = Name((ry, B.labels[B.join_all(vals)]) for ry, vals in groups.items())
    memo[x] = hit
    return hit


def section(x: Name) -> Name:
    """Inclusion of functional names into all names."""
    if not x.is_functional:
        raise NotFunctionalError(f"{x} is not a functional name")
    return x


def vb_stage_check(B: RegularOpenAlgebra, x: Name) -> int:
    """Certify ``x`` as a Boolean-universe element and return its stage.

    ``x`` is a function into the carrier of ``B`` whose domain lies in the
    previous stage; the stage is the name rank.
    """
    if not x.is_functional:
        raise NotFunctionalError(f"{x} is not a functional name")
    for y in constituents(x):
        for _, p in y.pairs:
            B.index(p)
    return x.rank


def evaluate(x: Name, G: Iterable[str], _memo: dict | None = None) -> HFSet:
    """The interpretation of ``x`` under the filter ``G``."""
    members = G if isinstance(G, (set, frozenset)) else frozenset(G)
    memo = {} if _memo is None else _memo
    hit = memo.get(x)
    if hit is None:
        hit = HFSet(evaluate(y, members, memo) for y, p in x.pairs if p in members)
        memo[x] = hit
    return hit


def check_name(s: HFSet, P: Poset) -> Name:
    """The canonical name of ``s``: every member paired with the top condition."""
    return Name((check_name(t, P), P.top) for t in s)


def hf_closure(s: HFSet) -> list[HFSet]:
    """``s`` together with all its hereditary members, canonically ordered."""
    seen: set[HFSet] = set()
    stack = [s]
    while stack:
        t = stack.pop()
        if t not in seen:
            seen.add(t)
            stack.extend(t)
    return sorted(seen, key=lambda t: (t.rank, str(t)))


def hf_sets_of_rank(rank: int) -> list[HFSet]:
    """All hereditarily finite sets of rank below ``rank`` (the stage V_rank)."""
    stage = [HF_EMPTY] if rank >= 1 else []
    for _ in range(1, rank):
        stage = [
            HFSet(itertools.compress(stage, bits_of(k, len(stage))))
            for k in range(2 ** len(stage))
        ]
    return sorted(stage, key=lambda t: (t.rank, str(t)))
