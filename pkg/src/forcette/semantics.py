"""Poset forcing beside Boolean values in the completion.

The forcing relation is computed for every condition at once: each closed
formula maps to the bitmask of conditions forcing it. The definitional
clauses become mask operations:

* ``x = y``: forcers are the conditions whose cone avoids every condition
  that separates ``z in x`` from ``z in y`` for some ``z`` in either domain;
* ``x in y`` and the disjunctive clauses: forcers form the set of
  conditions below which the witnessing set is dense;
* ``~``, ``->`` and ``<->``: conditions whose cone contains no forcer of
  the refuting formula.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import ForcingError, NotFunctionalError, UniverseError
from .formula import (
    And,
    Const,
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
    substitute,
)
from .names import Name, NameUniverse, retract, transport
from .poset import Poset, bits
from .ro import RegularOpenAlgebra, canonical_morphism, ro_algebra


class SemanticsContext:
    """A poset with its quantifier universe and memo tables.

    The memo tables are plain dicts written with insert-if-absent semantics,
    so concurrent readers at worst repeat a computation.
    """

    def __init__(
        self,
        poset: Poset,
        universe: NameUniverse,
        algebra: RegularOpenAlgebra | None = None,
    ):
        if universe.poset is not poset:
            for x in universe:
                for _, p in x.pairs:
                    poset.index(p)
        self.poset = poset
        self.universe = universe
        self.algebra = algebra
        self._eq: dict[tuple[Name, Name], int] = {}
        self._mem: dict[tuple[Name, Name], int] = {}
        self._forcers: dict[Formula, int] = {}
        self._bv_eq: dict[tuple[Name, Name], int] = {}
        self._bv_mem: dict[tuple[Name, Name], int] = {}
        self._bv: dict[Formula, int] = {}
        self._functional = universe.functional()

    @classmethod
    def over_algebra(
        cls, algebra: RegularOpenAlgebra, universe: NameUniverse | Iterable[Name]
    ) -> SemanticsContext:
        """Context whose conditions are the nonzero elements of ``algebra``."""
        poset = algebra.as_poset(include_zero=False)
        if not isinstance(universe, NameUniverse):
            universe = NameUniverse.closure(poset, universe)
        return cls(poset, universe, algebra)

    def check_constants(self, f: Formula) -> None:
        for x in constants(f):
            if x not in self.universe:
                raise UniverseError(f"constant {x} is outside the quantifier universe")

    # -- poset forcing -------------------------------------------------------

    def _cone_avoiding(self, mask: int) -> int:
        """Conditions with no member of ``mask`` below them."""
        return self.poset.interior_mask(self.poset.full & ~mask)

    def eq_mask(self, x: Name, y: Name) -> int:
        hit = self._eq.get((x, y))
        if hit is not None:
            return hit
        if x is y:
            hit = self.poset.full
        else:
            separated = 0
            for z in dict.fromkeys(x.dom + y.dom):
                separated |= self.mem_mask(z, x) ^ self.mem_mask(z, y)
            hit = self._cone_avoiding(separated)
        self._eq.setdefault((x, y), hit)
        self._eq.setdefault((y, x), hit)
        return hit

    def mem_mask(self, x: Name, y: Name) -> int:
        hit = self._mem.get((x, y))
        if hit is not None:
            return hit
        P = self.poset
        witnesses = 0
        for z, r in y.pairs:
            witnesses |= P.down_mask(P.index(r)) & self.eq_mask(x, z)
        hit = P.dense_below_mask(witnesses)
        return self._mem.setdefault((x, y), hit)

    def forcers_mask(self, f: Formula) -> int:
        hit = self._forcers.get(f)
        if hit is not None:
            return hit
        P = self.poset
        cls = type(f)
        if cls is Eq or cls is Mem:
            x, y = _closed_terms(f)
            hit = self.eq_mask(x, y) if cls is Eq else self.mem_mask(x, y)
        elif cls is Not:
            hit = self._cone_avoiding(self.forcers_mask(f.body))
        elif cls is And:
            hit = self.forcers_mask(f.left) & self.forcers_mask(f.right)
        elif cls is Or:
            hit = P.dense_below_mask(self.forcers_mask(f.left) | self.forcers_mask(f.right))
        elif cls is Implies:
            hit = self._cone_avoiding(self._refuting(f.left, f.right))
        elif cls is Iff:
            hit = self._cone_avoiding(
                self._refuting(f.left, f.right) | self._refuting(f.right, f.left)
            )
        elif cls is Forall:
            hit = P.full
            for x in self.universe:
                hit &= self.forcers_mask(substitute(f.body, f.var, x))
        elif cls is Exists:
            acc = 0
            for x in self.universe:
                acc |= self.forcers_mask(substitute(f.body, f.var, x))
            hit = P.dense_below_mask(acc)
        else:
            raise TypeError(f"not a formula: {f!r}")
        return self._forcers.setdefault(f, hit)

    def _refuting(self, phi: Formula, psi: Formula) -> int:
        """Forcers of ``phi & ~psi``."""
        return self.forcers_mask(phi) & self._cone_avoiding(self.forcers_mask(psi))

    # -- Boolean values ------------------------------------------------------

    def _require_algebra(self) -> RegularOpenAlgebra:
        if self.algebra is None:
            raise ForcingError("this context has no Boolean algebra")
        return self.algebra

    def value_of(self, x: Name, t: Name) -> int:
        """``x(t)``, which is 0 outside the domain of ``x``."""
        B = self._require_algebra()
        for c, p in x.pairs:
            if c is t:
                return B.index(p)
        return B.zero

    def bv_eq(self, x: Name, y: Name) -> int:
        hit = self._bv_eq.get((x, y))
        if hit is not None:
            return hit
        B = self._require_algebra()
        hit = B.meet(self._bv_subset(x, y), self._bv_subset(y, x))
        self._bv_eq.setdefault((x, y), hit)
        self._bv_eq.setdefault((y, x), hit)
        return hit

    def _bv_subset(self, x: Name, y: Name) -> int:
        B = self.algebra
        return B.meet_all(
            B.join(B.complement(B.index(p)), self.bv_mem(t, y)) for t, p in x.pairs
        )

    def bv_mem(self, x: Name, y: Name) -> int:
        hit = self._bv_mem.get((x, y))
        if hit is not None:
            return hit
        B = self._require_algebra()
        hit = B.join_all(B.meet(self.bv_eq(x, t), B.index(p)) for t, p in y.pairs)
        return self._bv_mem.setdefault((x, y), hit)

    def bv(self, f: Formula) -> int:
        hit = self._bv.get(f)
        if hit is not None:
            return hit
        B = self._require_algebra()
        cls = type(f)
        if cls is Eq or cls is Mem:
            x, y = _closed_terms(f)
            hit = self.bv_eq(x, y) if cls is Eq else self.bv_mem(x, y)
        elif cls is Not:
            hit = B.complement(self.bv(f.body))
        elif cls is And:
            hit = B.meet(self.bv(f.left), self.bv(f.right))
        elif cls is Or:
            hit = B.join(self.bv(f.left), self.bv(f.right))
        elif cls is Implies:
            hit = B.join(B.complement(self.bv(f.left)), self.bv(f.right))
        elif cls is Iff:
            a, b = self.bv(f.left), self.bv(f.right)
            hit = B.meet(B.join(B.complement(a), b), B.join(B.complement(b), a))
        elif cls is Forall:
            hit = B.meet_all(self.bv(substitute(f.body, f.var, x)) for x in self._functional)
        elif cls is Exists:
            hit = B.join_all(self.bv(substitute(f.body, f.var, x)) for x in self._functional)
        else:
            raise TypeError(f"not a formula: {f!r}")
        return self._bv.setdefault(f, hit)


def _closed_terms(f: Eq | Mem) -> tuple[Name, Name]:
    left, right = f.left, f.right
    if type(left) is Var or type(right) is Var:
        var = left if type(left) is Var else right
        raise ForcingError(f"free variable {var.name!r} in a formula that must be closed")
    return left.name, right.name


# -- public operations ---------------------------------------------------------


def forcers(ctx: SemanticsContext, f: Formula) -> frozenset[str]:
    """All conditions forcing the closed formula ``f``."""
    ctx.check_constants(f)
    return ctx.poset.members(ctx.forcers_mask(f))


def forces_star(ctx: SemanticsContext, p: str, f: Formula) -> bool:
    ctx.check_constants(f)
    return bool(ctx.forcers_mask(f) >> ctx.poset.index(p) & 1)


def boolean_value_index(ctx: SemanticsContext, f: Formula) -> int:
    ctx.check_constants(f)
    for x in constants(f):
        if not x.is_functional:
            raise NotFunctionalError(f"constant {x} is not a functional name; retract it first")
    return ctx.bv(f)


def boolean_value(ctx: SemanticsContext, f: Formula) -> frozenset[str]:
    """``||f||`` as a regular open set of the base poset."""
    return ctx._require_algebra().element(boolean_value_index(ctx, f))


def sup_forcing_index(ctx: SemanticsContext, f: Formula) -> int:
    B = ctx._require_algebra()
    ctx.check_constants(f)
    mask = ctx.forcers_mask(f)
    return B.join_all(B.index(ctx.poset.elements[k]) for k in bits(mask))


def sup_forcing(ctx: SemanticsContext, f: Formula) -> frozenset[str]:
    """The join of all conditions forcing ``f``; the zero element if none does."""
    return ctx._require_algebra().element(sup_forcing_index(ctx, f))


def forces_ba(ctx: SemanticsContext, p: str, f: Formula) -> bool:
    """``p`` forces ``f`` in the Boolean sense: ``i(p) <= ||f||``.

    ``p`` is a condition of the poset the algebra completes.
    """
    B = ctx._require_algebra()
    return B.leq(B.cone_value(p), boolean_value_index(ctx, f))


def max_principle_check(ctx: SemanticsContext, u: Name) -> tuple[frozenset[str], frozenset[str]]:
    """``(join of u(t) over dom u, join of ||t in u|| over the functional universe)``."""
    B = ctx._require_algebra()
    if not u.is_functional:
        raise NotFunctionalError(f"{u} is not a functional name")
    left = B.join_all(B.index(p) for _, p in u.pairs)
    right = B.join_all(ctx.bv_mem(t, u) for t in ctx._functional)
    return B.element(left), B.element(right)


def atomic_shapes(ctx: SemanticsContext, x: Name, y: Name) -> dict[str, tuple[int, int]]:
    """Supremum values of atoms next to their closed-form expansions.

    ``y(t)`` for a name that need not be functional is the join of the
    conditions paired with ``t``. Returns ``{"in": (lhs, rhs), "=": (lhs, rhs)}``
    as algebra indices.
    """
    B = ctx._require_algebra()

    def sup(f):
        return sup_forcing_index(ctx, f)

    def cond(name, t):
        return B.join_all(B.index(p) for c, p in name.pairs if c is t)

    def iff(a, b):
        return B.meet(B.join(B.complement(a), b), B.join(B.complement(b), a))

    cx, cy = Const(x), Const(y)
    mem_rhs = B.join_all(B.meet(sup(Eq(Const(t), cx)), cond(y, t)) for t in y.dom)
    eq_rhs = B.meet_all(
        iff(sup(Mem(Const(t), cx)), sup(Mem(Const(t), cy)))
        for t in dict.fromkeys(x.dom + y.dom)
    )
    return {"in": (sup(Mem(cx, cy)), mem_rhs), "=": (sup(Eq(cx, cy)), eq_rhs)}


# -- the bridge between poset and Boolean forcing --------------------------------


class BridgeChecker:
    """Both sides of the bridge for a fixed poset and name universe.

    The left side forces over ``P`` with quantifiers over ``universe``; the
    right side forces in the completion, with every constant and the
    universe carried through ``r . i*``.
    """

    def __init__(self, P: Poset, universe: NameUniverse, algebra: RegularOpenAlgebra | None = None):
        self.poset = P
        self.algebra = algebra if algebra is not None else ro_algebra(P)
        self.morphism = canonical_morphism(P, self.algebra)
        self._carry_memo: dict[Name, Name] = {}
        self._transport_memo: dict[Name, Name] = {}
        self._retract_memo: dict[Name, Name] = {}
        self.lhs_ctx = SemanticsContext(P, universe)
        self.rhs_ctx = SemanticsContext.over_algebra(
            self.algebra, [self.carry(x) for x in universe]
        )

    @classmethod
    def for_rank(cls, P: Poset, rank: int, extra: Iterable[Name] = ()) -> BridgeChecker:
        from .names import enumerate_names

        universe = enumerate_names(P, rank).union(extra)
        return cls(P, universe)

    def carry(self, x: Name) -> Name:
        hit = self._carry_memo.get(x)
        if hit is None:
            hit = retract(
                self.algebra, transport(self.morphism, x, self._transport_memo), self._retract_memo
            )
            self._carry_memo[x] = hit
        return hit

    def carry_formula(self, f: Formula) -> Formula:
        return map_constants(f, self.carry)

    def lhs_mask(self, f: Formula) -> int:
        self.lhs_ctx.check_constants(f)
        return self.lhs_ctx.forcers_mask(f)

    def rhs_mask(self, f: Formula) -> int:
        """Conditions ``p`` of the original poset with ``i(p) <= ||r i*(f)||``."""
        g = self.carry_formula(f)
        value = boolean_value_index(self.rhs_ctx, g)
        B, P = self.algebra, self.poset
        return sum(1 << k for k, p in enumerate(P) if B.leq(B.cone_value(p), value))

    def check(self, p: str, f: Formula) -> tuple[bool, bool]:
        k = self.poset.index(p)
        return bool(self.lhs_mask(f) >> k & 1), bool(self.rhs_mask(f) >> k & 1)


def bridge_check(
    P: Poset, p: str, f: Formula, rank: int = 1, checker: BridgeChecker | None = None
) -> tuple[bool, bool]:
    """``(p forces f over P, p forces r i*(f) in the completion)``."""
    if checker is None:
        checker = BridgeChecker.for_rank(P, rank, constants(f))
    return checker.check(p, f)
