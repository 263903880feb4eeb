"""The shared corpus of small posets with their standard names and formula sweeps."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from .formula import (
    CONNECTIVES,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Mem,
    Var,
    enumerate_formulas,
)
from .names import EMPTY, Name
from .poset import Poset, cohen_poset, one_point_poset


def p3() -> Poset:
    """Top above two incompatible atoms."""
    return Poset(["1", "a", "b"], [("a", "1"), ("b", "1")], "1", name="P3")


def c2() -> Poset:
    """A two-element chain; not separative."""
    return Poset(["1", "p"], [("p", "1")], "1", name="C2")


def corpus_posets() -> dict[str, Poset]:
    return {
        "P3": p3(),
        "C2": c2(),
        "Cohen(1,1)": cohen_poset(1, 1),
        "Cohen(1,2)": cohen_poset(1, 2),
    }


def minimal_elements(P: Poset) -> list[str]:
    return [p for k, p in enumerate(P) if P.down_mask(k) == 1 << k]


def default_names(P: Poset) -> dict[str, Name]:
    """``n0`` empty, ``n1`` one minimal condition, ``n2`` the top, ``n3`` a two-condition name."""
    lows = [p for p in minimal_elements(P) if p != P.top] or [P.top]
    n0 = EMPTY
    n1 = Name([(n0, lows[0])])
    n2 = Name([(n0, P.top)])
    if len(lows) >= 2:
        n3 = Name([(n0, lows[0]), (n0, lows[1])])
    else:
        n3 = Name([(n0, lows[0]), (n0, P.top)])
    return {"n0": n0, "n1": n1, "n2": n2, "n3": n3}


def labels_for(names: Mapping[str, Name]) -> dict[Name, str]:
    """Inverse of a name table, keeping the first label of each name."""
    out: dict[Name, str] = {}
    for label, x in names.items():
        out.setdefault(x, label)
    return out


def sweep_formulas(
    names: Sequence[Name],
    depth: int = 2,
    connectives: Sequence[str] = CONNECTIVES,
    variable: str = "x",
) -> list[Formula]:
    """The standard closed-formula sweep over ``names``.

    It consists of every atom over the names, every formula of depth at most
    ``depth`` over the atoms ``c0 in c1`` and ``c1 = c2``, and every
    ``forall``/``exists`` over a depth-one body built from ``x in c1``,
    ``x = c0`` and ``c0 in x`` (``ck`` is the ``k``-th name, cyclically).
    """
    if not names:
        return []
    c = [Const(names[k % len(names)]) for k in range(3)]
    out: dict[Formula, None] = {}
    for x in names:
        for y in names:
            out[Mem(Const(x), Const(y))] = None
            out[Eq(Const(x), Const(y))] = None
    for f in enumerate_formulas([Mem(c[0], c[1]), Eq(c[1], c[2])], depth, connectives):
        out[f] = None
    v = Var(variable)
    bodies = enumerate_formulas([Mem(v, c[1]), Eq(v, c[0]), Mem(c[0], v)], min(depth, 1), connectives)
    for quant in (Forall, Exists):
        for body in bodies:
            out[quant(variable, body)] = None
    return list(out)


__all__ = [
    "c2",
    "corpus_posets",
    "default_names",
    "labels_for",
    "minimal_elements",
    "one_point_poset",
    "p3",
    "sweep_formulas",
]
