"""Finite forcing posets and their order-theoretic predicates.

Subsets of a poset are handled internally as integer bitmasks over the
declared element order; the public methods accept and return frozensets of
element identifiers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import CapExceededError, ForcingError, UnknownElementError

DEFAULT_CAP = 12


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset_key(mask: int) -> tuple:
    """Canonical ordering of subsets: by size, then by member indices."""
    return (popcount(mask), tuple(bits(mask)))


class Poset:
    """A finite preorder with a top element.

    ``order`` lists pairs ``(p, q)`` meaning ``p <= q``; the reflexive and
    transitive closure is taken unless ``closed=True`` promises it already is.
    """

    def __init__(
        self,
        elements: Iterable[str],
        order: Iterable[tuple[str, str]],
        top: str,
        name: str = "",
    ):
        self.elements: tuple[str, ...] = tuple(elements)
        if not self.elements:
            raise ForcingError("a forcing poset needs at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ForcingError("duplicate element identifiers")
        self.name = name
        self._index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        self.full = (1 << n) - 1
        down = [1 << i for i in range(n)]
        for p, q in order:
            down[self.index(q)] |= 1 << self.index(p)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = down[i]
                for j in bits(down[i]):
                    acc |= down[j]
                if acc != down[i]:
                    down[i] = acc
                    changed = True
        self._down = tuple(down)
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i
        self._up = tuple(up)
        self.top = top
        self.top_index = self.index(top)
        if self._down[self.top_index] != self.full:
            missing = self.members(self.full & ~self._down[self.top_index])
            raise ForcingError(f"top {top!r} is not above {sorted(missing)}")
        self._dense_below_cache: dict[int, int] = {}

    # -- element and subset plumbing -------------------------------------

    def index(self, p: str) -> int:
        try:
            return self._index[p]
        except (KeyError, TypeError):
            raise UnknownElementError(p, self.name or "poset") from None

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for p in subset:
            m |= 1 << self.index(p)
        return m

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in bits(mask))

    def ordered(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits(mask))

    def format_set(self, subset: Iterable[str] | int) -> str:
        mask = subset if isinstance(subset, int) else self.mask(subset)
        return "{" + ",".join(self.ordered(mask)) + "}"

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Poset{label} {self.format_set(self.full)} top={self.top}>"

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down(self, p: str) -> frozenset[str]:
        return self.members(self._down[self.index(p)])

    def up(self, p: str) -> frozenset[str]:
        return self.members(self._up[self.index(p)])

    @property
    def order(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (self.elements[j], self.elements[i])
            for i in range(len(self))
            for j in bits(self._down[i])
        )

    def is_antisymmetric(self) -> bool:
        return all(
            not (self._down[i] >> j & 1 and self._down[j] >> i & 1)
            for i in range(len(self))
            for j in range(i)
        )

    def hasse_edges(self) -> list[tuple[str, str]]:
        """Covering pairs ``(q, p)`` with ``q < p`` and nothing strictly between."""
        edges = []
        for i in range(len(self)):
            strict = self._down[i] & ~self._up[i]
            for j in bits(strict):
                between = strict & self._up[j] & ~self._down[j]
                if not between:
                    edges.append((self.elements[j], self.elements[i]))
        return edges

    def check_cap(self, cap: int) -> None:
        if len(self) > cap:
            raise CapExceededError(f"{len(self)} elements exceed enumeration cap {cap}")

    # -- order predicates --------------------------------------------------

    def leq(self, p: str, q: str) -> bool:
        return bool(self._down[self.index(q)] >> self.index(p) & 1)

    def compatible(self, p: str, q: str) -> bool:
        return bool(self._down[self.index(p)] & self._down[self.index(q)])

    def interior_mask(self, mask: int) -> int:
        """Largest down-closed subset of ``mask``."""
        return sum(1 << i for i in range(len(self)) if self._down[i] & ~mask == 0)

    def closure_mask(self, mask: int) -> int:
        """Smallest up-closed superset of ``mask``."""
        acc = 0
        for i in bits(mask):
            acc |= self._up[i]
        return acc

    def dense_below_mask(self, mask: int) -> int:
        """All ``p`` such that ``mask`` is dense below ``p``.

        Every ``q <= p`` must have a member of ``mask`` below it, i.e. ``p`` lies
        in the interior of the up-closure of ``mask``.
        """
        hit = self._dense_below_cache.get(mask)
        if hit is None:
            hit = self.interior_mask(self.closure_mask(mask))
            self._dense_below_cache[mask] = hit
        return hit

    def is_dense(self, subset: Iterable[str]) -> bool:
        return self.dense_below_mask(self.mask(subset)) == self.full

    def is_predense(self, subset: Iterable[str]) -> bool:
        m = self.mask(subset)
        return all(
            any(self._down[i] & self._down[d] for d in bits(m)) for i in range(len(self))
        )

    def is_dense_below(self, subset: Iterable[str], p: str) -> bool:
        return bool(self.dense_below_mask(self.mask(subset)) >> self.index(p) & 1)

    def all_dense_subsets(self, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
        self.check_cap(cap)
        found = [m for m in range(self.full + 1) if self.dense_below_mask(m) == self.full]
        return [self.members(m) for m in sorted(found, key=subset_key)]

    def _filter_mask_ok(self, m: int) -> bool:
        if not m >> self.top_index & 1:
            return False
        for i in bits(m):
            if self._up[i] & ~m:
                return False
        members = list(bits(m))
        for a, b in itertools.combinations(members, 2):
            if not self._down[a] & self._down[b] & m:
                return False
        return True

    def is_filter(self, subset: Iterable[str]) -> bool:
        return self._filter_mask_ok(self.mask(subset))

    def filters(self, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
        self.check_cap(cap)
        found = [m for m in range(self.full + 1) if self._filter_mask_ok(m)]
        return [self.members(m) for m in sorted(found, key=subset_key)]

    def is_generic(self, subset: Iterable[str], cap: int = DEFAULT_CAP) -> bool:
        """Filter meeting every dense subset of the (finite) poset."""
        m = self.mask(subset)
        if not self._filter_mask_ok(m):
            return False
        return all(self.mask(d) & m for d in self.all_dense_subsets(cap))

    def generic_filters(self, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
        self.check_cap(cap)
        dense = [self.mask(d) for d in self.all_dense_subsets(cap)]
        found = [
            m
            for m in range(self.full + 1)
            if self._filter_mask_ok(m) and all(d & m for d in dense)
        ]
        return [self.members(m) for m in sorted(found, key=subset_key)]

    def is_separative(self) -> bool:
        n = len(self)
        for p in range(n):
            for q in range(n):
                if self._down[q] >> p & 1:
                    continue
                if not any(self._down[r] & self._down[q] == 0 for r in bits(self._down[p])):
                    return False
        return True


def one_point_poset(name: str = "1pt") -> Poset:
    return Poset(["1"], [], "1", name=name)


def cohen_poset(n: int, k: int, cap: int = 4) -> Poset:
    """Finite partial functions from ``n x k`` to ``{0, 1}``, ordered by reverse inclusion.

    Element identifiers spell the function pointwise: ``c`` followed by one
    character per point of ``n x k`` (``_`` undefined, ``0`` or ``1``).
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if n * k > cap:
        raise CapExceededError(f"n*k = {n * k} exceeds cap {cap}")
    points = n * k
    funcs = list(itertools.product((None, 0, 1), repeat=points))

    def ident(f):
        return "c" + "".join("_" if v is None else str(v) for v in f)

    def extends(f, g):
        return all(gv is None or fv == gv for fv, gv in zip(f, g))

    order = [(ident(f), ident(g)) for f in funcs for g in funcs if extends(f, g)]
    return Poset([ident(f) for f in funcs], order, ident(funcs[0]), name=f"Cohen({n},{k})")


@dataclass(frozen=True, eq=False)
class PosetMap:
    """A total function between the carriers of two posets."""

    source: Poset
    target: Poset
    mapping: Mapping[str, str] = field(repr=False)

    def __post_init__(self):
        mapping = dict(self.mapping)
        for p in self.source:
            if p not in mapping:
                raise UnknownElementError(p, "map domain (map is not total)")
            if mapping[p] not in self.target:
                raise UnknownElementError(mapping[p], self.target.name or "target")
        for p in mapping:
            if p not in self.source:
                raise UnknownElementError(p, self.source.name or "source")
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(
            self, "_imap", tuple(self.target.index(mapping[p]) for p in self.source)
        )

    def __call__(self, p: str) -> str:
        return self.mapping[p]

    def index_map(self, i: int) -> int:
        return self._imap[i]

    def image_mask(self, mask: int) -> int:
        acc = 0
        for i in bits(mask):
            acc |= 1 << self._imap[i]
        return acc

    def then(self, other: PosetMap) -> PosetMap:
        """``other`` after ``self``."""
        if other.source is not self.target:
            raise ForcingError("maps do not compose")
        return PosetMap(self.source, other.target, {p: other(self(p)) for p in self.source})

    def preimage(self, subset: Iterable[str]) -> frozenset[str]:
        m = self.target.mask(subset)
        return frozenset(p for i, p in enumerate(self.source) if m >> self._imap[i] & 1)

    @classmethod
    def identity(cls, poset: Poset) -> PosetMap:
        return cls(poset, poset, {p: p for p in poset})


def dense_morphism_violations(i: PosetMap) -> list[str]:
    """Violated dense-morphism axioms, in axiom order; empty when ``i`` is one."""
    src, tgt = i.source, i.target
    out = []
    if i(src.top) != tgt.top:
        out.append(f"top: i({src.top}) = {i(src.top)} is not {tgt.top}")
    for p in src:
        for q in src:
            if src.leq(q, p) and not tgt.leq(i(q), i(p)):
                out.append(f"monotone: {q} <= {p} but i({q}) = {i(q)} not <= i({p}) = {i(p)}")
    for p in src:
        for q in src:
            if src.compatible(p, q) != tgt.compatible(i(p), i(q)):
                kind = "preserved" if src.compatible(p, q) else "reflected"
                out.append(
                    f"incompatibility: compatibility of ({p}, {q}) not {kind} by images "
                    f"({i(p)}, {i(q)})"
                )
    image = i.image_mask(src.full)
    if tgt.dense_below_mask(image) != tgt.full:
        out.append("dense-image: image of i is not dense in the target")
    return out


def is_dense_morphism(i: PosetMap) -> tuple[bool, list[str]]:
    report = dense_morphism_violations(i)
    return not report, report
