"""Slow, literal reference implementations used to cross-check the engines.

Everything here works on plain Python sets, one condition at a time, and
follows the textbook clauses word for word. None of it shares code with the
mask-based engines beyond the formula node classes and the Name type.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from forcette.formula import And, Const, Eq, Exists, Forall, Iff, Implies, Mem, Not, Or, Var
from forcette.names import Name


class NaivePoset:
    def __init__(self, elements, pairs, top):
        self.elements = list(elements)
        self.top = top
        le = {(p, p) for p in self.elements} | set(pairs)
        changed = True
        while changed:
            changed = False
            for (p, q), (r, s) in itertools.product(list(le), list(le)):
                if q == r and (p, s) not in le:
                    le.add((p, s))
                    changed = True
        self.le = frozenset(le)

    @classmethod
    def of(cls, P):
        return cls(P.elements, P.hasse_edges(), P.top)

    def leq(self, p, q):
        return (p, q) in self.le

    def down(self, p):
        return frozenset(q for q in self.elements if self.leq(q, p))

    def up_closure(self, S):
        return frozenset(p for p in self.elements if any(self.leq(s, p) for s in S))

    def interior(self, S):
        return frozenset(p for p in self.elements if self.down(p) <= set(S))

    def compatible(self, p, q):
        return any(self.leq(r, p) and self.leq(r, q) for r in self.elements)

    def dense_below(self, D, p):
        return all(any(self.leq(d, q) for d in D) for q in self.down(p))

    def is_dense(self, D):
        return all(any(self.leq(d, p) for d in D) for p in self.elements)

    def is_filter(self, G):
        G = set(G)
        if self.top not in G:
            return False
        if any(self.leq(q, p) and p not in G for q in G for p in self.elements):
            return False
        return all(any(r in G and self.leq(r, p) and self.leq(r, q) for r in self.elements) for p in G for q in G)

    def subsets(self):
        for r in range(len(self.elements) + 1):
            for c in itertools.combinations(self.elements, r):
                yield frozenset(c)

    def generic_filters(self):
        dense = [D for D in self.subsets() if self.is_dense(D)]
        return [G for G in self.subsets() if self.is_filter(G) and all(G & D for D in dense)]


def cohen(n, k):
    points = n * k
    funcs = list(itertools.product((None, 0, 1), repeat=points))

    def ident(f):
        return "c" + "".join("_" if v is None else str(v) for v in f)

    pairs = [
        (ident(f), ident(g))
        for f in funcs
        for g in funcs
        if all(gv is None or fv == gv for fv, gv in zip(f, g))
    ]
    return NaivePoset([ident(f) for f in funcs], pairs, ident(funcs[0]))


# -- regular open algebra -----------------------------------------------------


class NaiveAlgebra:
    """Regular opens as frozensets; labels printed in declared element order."""

    def __init__(self, P: NaivePoset):
        self.P = P
        opens = [S for S in P.subsets() if all(P.down(p) <= S for p in S)]
        self.carrier = [U for U in opens if P.interior(P.up_closure(U)) == U]
        self.zero, self.one = frozenset(), frozenset(P.elements)

    def label(self, U):
        return "{" + ",".join(p for p in self.P.elements if p in U) + "}"

    def by_label(self, label):
        for U in self.carrier:
            if self.label(U) == label:
                return U
        raise KeyError(label)

    def join(self, family):
        acc = set()
        for U in family:
            acc |= U
        return self.P.interior(self.P.up_closure(acc))

    def meet(self, family):
        acc = set(self.P.elements)
        for U in family:
            acc &= U
        return frozenset(acc)

    def comp(self, U):
        return frozenset(self.P.elements) - self.P.up_closure(U)

    def cone(self, p):
        return self.P.interior(self.P.up_closure(self.P.down(p)))

    def nonzero_poset(self) -> NaivePoset:
        keep = [U for U in self.carrier if U]
        pairs = [(self.label(U), self.label(V)) for U in keep for V in keep if U <= V]
        return NaivePoset([self.label(U) for U in keep], pairs, self.label(self.one))


# -- formulas -------------------------------------------------------------------


def subst(f, v, x):
    cls = type(f)
    if cls is Var:
        return Const(x) if f.name == v else f
    if cls is Const:
        return f
    if cls in (Eq, Mem):
        return cls(subst(f.left, v, x), subst(f.right, v, x))
    if cls is Not:
        return Not(subst(f.body, v, x))
    if cls in (And, Or, Implies, Iff):
        return cls(subst(f.left, v, x), subst(f.right, v, x))
    if f.var == v:
        return f
    return cls(f.var, subst(f.body, v, x))


def dom(x: Name):
    return list(dict.fromkeys(c for c, _ in x.pairs))


# -- poset forcing ----------------------------------------------------------------


def make_forces(P: NaivePoset, universe):
    universe = list(universe)

    @lru_cache(maxsize=None)
    def forces(p, f):
        cls = type(f)
        if cls is Eq:
            x, y = f.left.name, f.right.name
            return all(
                forces(q, Mem(Const(z), Const(x))) == forces(q, Mem(Const(z), Const(y)))
                for z in dict.fromkeys(dom(x) + dom(y))
                for q in P.down(p)
            )
        if cls is Mem:
            x, y = f.left.name, f.right.name
            witnesses = {
                q
                for q in P.down(p)
                if any(P.leq(q, r) and forces(q, Eq(Const(x), Const(z))) for z, r in y.pairs)
            }
            return P.dense_below(witnesses, p)
        if cls is And:
            return forces(p, f.left) and forces(p, f.right)
        if cls is Not:
            return not any(forces(q, f.body) for q in P.down(p))
        if cls is Implies:
            return not any(forces(q, And(f.left, Not(f.right))) for q in P.down(p))
        if cls is Or:
            return P.dense_below({q for q in P.elements if forces(q, f.left) or forces(q, f.right)}, p)
        if cls is Iff:
            return not any(forces(q, And(f.left, Not(f.right))) for q in P.down(p)) and not any(
                forces(r, And(Not(f.left), f.right)) for r in P.down(p)
            )
        if cls is Forall:
            return all(forces(p, subst(f.body, f.var, x)) for x in universe)
        if cls is Exists:
            good = {q for q in P.elements if any(forces(q, subst(f.body, f.var, x)) for x in universe)}
            return P.dense_below(good, p)
        raise TypeError(f)

    return forces


# -- Boolean values ---------------------------------------------------------------


def make_bv(A: NaiveAlgebra, universe):
    """``||f||`` for formulas whose constants are functional names over ``A`` minus zero."""
    functional = [x for x in universe if x.is_functional]

    def value(y: Name, t: Name):
        return A.join(A.by_label(p) for c, p in y.pairs if c is t)

    @lru_cache(maxsize=None)
    def mem(x, y):
        return A.join(A.meet([eq(x, t), value(y, t)]) for t in dom(y))

    @lru_cache(maxsize=None)
    def sub(x, y):
        return A.meet(A.join([A.comp(value(x, t)), mem(t, y)]) for t in dom(x))

    @lru_cache(maxsize=None)
    def eq(x, y):
        return A.meet([sub(x, y), sub(y, x)])

    @lru_cache(maxsize=None)
    def bv(f):
        cls = type(f)
        if cls is Mem:
            return mem(f.left.name, f.right.name)
        if cls is Eq:
            return eq(f.left.name, f.right.name)
        if cls is Not:
            return A.comp(bv(f.body))
        if cls is And:
            return A.meet([bv(f.left), bv(f.right)])
        if cls is Or:
            return A.join([bv(f.left), bv(f.right)])
        if cls is Implies:
            return A.join([A.comp(bv(f.left)), bv(f.right)])
        if cls is Iff:
            a, b = bv(f.left), bv(f.right)
            return A.meet([A.join([A.comp(a), b]), A.join([A.comp(b), a])])
        if cls is Exists:
            return A.join(bv(subst(f.body, f.var, x)) for x in functional)
        if cls is Forall:
            return A.meet(bv(subst(f.body, f.var, x)) for x in functional)
        raise TypeError(f)

    return bv


# -- names ----------------------------------------------------------------------


def retract(A: NaiveAlgebra, x: Name) -> Name:
    memo = {}

    def r(x):
        if x in memo:
            return memo[x]
        groups = {}
        for z, p in x.pairs:
            groups.setdefault(r(z), set()).add(p)
        out = Name((rz, A.label(A.join(A.by_label(p) for p in ps))) for rz, ps in groups.items())
        memo[x] = out
        return out

    return r(x)


def transport(mapping, x: Name) -> Name:
    return Name((transport(mapping, c), mapping[p]) for c, p in x.pairs)


def evaluate(x: Name, G):
    return frozenset(evaluate(c, G) for c, p in x.pairs if p in G)


# -- sheaves ----------------------------------------------------------------------


def dense_covers(P: NaivePoset, p):
    below = sorted(P.down(p))
    out = []
    for r in range(len(below) + 1):
        for c in itertools.combinations(below, r):
            S = frozenset(c)
            if all(P.down(q) <= S for q in S) and P.dense_below(S, p):
                out.append(S)
    return out


def brute_is_sheaf(P: NaivePoset, values, restrict, covers):
    """``values[p]`` a list, ``restrict(p, q, x)`` the restriction, ``covers[p]`` sieves as sets."""
    for p in P.elements:
        for S in covers[p]:
            S = sorted(S)
            for choice in itertools.product(*(values[q] for q in S)):
                fam = dict(zip(S, choice))
                matching = all(
                    restrict(q, r, fam[q]) == fam[r] for q in S for r in S if P.leq(r, q)
                )
                if not matching:
                    continue
                amal = [x for x in values[p] if all(restrict(p, q, x) == fam[q] for q in S)]
                if len(amal) != 1:
                    return False
    return True
