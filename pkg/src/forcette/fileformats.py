"""Line-based text formats for posets and the objects built on them.

Every format ignores blank lines and ``#`` comments::

    poset P3            name n0 = {}                 presheaf F
    elements 1 a b      name n1 = { (n0, a) }        set 1 = x
    top 1                                            set a = 0 1
    le a 1                                           map 1 a : x->0
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from pathlib import Path

from .errors import ForcingError, ParseError
from .names import Name
from .poset import Poset
from .sheaves import Presheaf


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def read_text(source: str | Path) -> str:
    return Path(source).read_text(encoding="utf-8")


# -- posets -------------------------------------------------------------------


def parse_poset(text: str) -> Poset:
    name, elements, top, order = "", None, None, []
    for number, line in _lines(text):
        keyword, _, rest = line.partition(" ")
        args = rest.split()
        if keyword == "poset":
            if len(args) > 1:
                raise ParseError("poset takes one name", number, 1)
            name = args[0] if args else ""
        elif keyword == "elements":
            if elements is not None:
                raise ParseError("elements declared twice", number, 1)
            if not args:
                raise ParseError("elements needs at least one identifier", number, 1)
            if len(set(args)) != len(args):
                raise ParseError("duplicate element identifiers", number, 1)
            elements = args
        elif keyword == "top":
            if len(args) != 1:
                raise ParseError("top takes one element", number, 1)
            top = args[0]
        elif keyword == "le":
            if len(args) != 2:
                raise ParseError("le takes two elements", number, 1)
            order.append((number, args[0], args[1]))
        else:
            raise ParseError(f"unknown directive {keyword!r}", number, 1)
    if elements is None:
        raise ParseError("missing elements line")
    if top is None:
        raise ParseError("missing top line")
    known = set(elements)
    if top not in known:
        raise ParseError(f"top {top!r} is not a declared element")
    for number, p, q in order:
        for e in (p, q):
            if e not in known:
                raise ParseError(f"unknown element {e!r}", number, 1)
    return Poset(elements, [(p, q) for _, p, q in order], top, name=name)


def load_poset(path: str | Path) -> Poset:
    return parse_poset(read_text(path))


def format_poset(P: Poset) -> str:
    lines = [f"poset {P.name}" if P.name else "poset", "elements " + " ".join(P), f"top {P.top}"]
    lines.extend(f"le {q} {p}" for q, p in P.hasse_edges())
    return "\n".join(lines) + "\n"


# -- names --------------------------------------------------------------------

_NAME_LINE = re.compile(r"name\s+(\S+)\s*=\s*\{(.*)\}\s*$")
_PAIR = re.compile(r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*\)")


def parse_names(text: str, P: Poset) -> dict[str, Name]:
    """Declarations in order; a name may only mention names declared before it."""
    table: dict[str, Name] = {}
    for number, line in _lines(text):
        m = _NAME_LINE.match(line)
        if not m:
            raise ParseError("expected 'name <id> = { (<name>, <element>), ... }'", number, 1)
        label, body = m.group(1), m.group(2)
        if label in table:
            raise ParseError(f"name {label!r} declared twice", number, 1)
        found = list(_PAIR.finditer(body))
        leftover = _PAIR.sub("", body)
        if leftover.strip(" ,\t") or leftover.count(",") != max(len(found) - 1, 0):
            raise ParseError("malformed pair list", number, line.index("{") + 1)
        pairs = []
        for pm in found:
            child, cond = pm.group(1), pm.group(2)
            if child not in table:
                raise ParseError(f"unknown name {child!r} (names must be declared before use)", number, 1)
            if cond not in P:
                raise ParseError(f"unknown element {cond!r}", number, 1)
            pairs.append((table[child], cond))
        table[label] = Name(pairs)
    return table


def load_names(path: str | Path, P: Poset) -> dict[str, Name]:
    return parse_names(read_text(path), P)


def format_names(table: Mapping[str, Name]) -> str:
    """Inverse of :func:`parse_names`; children must have labels earlier in the table."""
    labels: dict[Name, str] = {}
    lines = []
    for label, x in table.items():
        parts = []
        for child, cond in x:
            if child not in labels:
                raise ForcingError(f"constituent {child} of {label} has no earlier label")
            parts.append(f"({labels[child]}, {cond})")
        lines.append(f"name {label} = {{ {', '.join(parts)} }}" if parts else f"name {label} = {{}}")
        labels.setdefault(x, label)
    return "\n".join(lines) + "\n"


# -- presheaves ---------------------------------------------------------------


def parse_presheaf(text: str, P: Poset) -> Presheaf:
    values: dict[str, list[str]] = {}
    maps: dict[tuple[str, str], dict[str, str]] = {}
    for number, line in _lines(text):
        keyword, _, rest = line.partition(" ")
        if keyword == "presheaf":
            continue
        if keyword == "set":
            left, eq, right = rest.partition("=")
            elt = left.strip()
            if not eq or not elt or len(elt.split()) != 1:
                raise ParseError("expected 'set <element> = <values>'", number, 1)
            if elt not in P:
                raise ParseError(f"unknown element {elt!r}", number, 1)
            if elt in values:
                raise ParseError(f"values for {elt!r} declared twice", number, 1)
            vals = right.split()
            if len(set(vals)) != len(vals):
                raise ParseError(f"duplicate values at {elt!r}", number, 1)
            values[elt] = vals
        elif keyword == "map":
            left, colon, right = rest.partition(":")
            ends = left.split()
            if not colon or len(ends) != 2:
                raise ParseError("expected 'map <from> <to> : v->w ...'", number, 1)
            for e in ends:
                if e not in P:
                    raise ParseError(f"unknown element {e!r}", number, 1)
            key = (ends[0], ends[1])
            if key in maps:
                raise ParseError(f"map {ends[0]} {ends[1]} declared twice", number, 1)
            table: dict[str, str] = {}
            for arrow in right.split():
                v, sep, w = arrow.partition("->")
                if not sep or not v or not w:
                    raise ParseError(f"expected 'v->w', found {arrow!r}", number, 1)
                if v in table:
                    raise ParseError(f"value {v!r} mapped twice", number, 1)
                table[v] = w
            maps[key] = table
        else:
            raise ParseError(f"unknown directive {keyword!r}", number, 1)
    return Presheaf.from_edges(P, values, maps)


def load_presheaf(path: str | Path, P: Poset) -> Presheaf:
    return parse_presheaf(read_text(path), P)


def format_presheaf(F: Presheaf, name: str = "F") -> str:
    return "\n".join([f"presheaf {name}", *F.format_lines()]) + "\n"


__all__ = [
    "format_names",
    "format_poset",
    "format_presheaf",
    "load_names",
    "load_poset",
    "load_presheaf",
    "parse_names",
    "parse_poset",
    "parse_presheaf",
    "read_text",
]
