"""Syntax trees and their text form for the forcing language.

Terms are variables or name constants. Connectives bind, loosest first:
``<->`` (left-associative), ``->`` (right-associative), ``|``, ``&``, then
``~`` and the quantifiers. A quantifier body extends as far right as
possible, so ``forall x. A & B`` is ``Forall(x, And(A, B))``.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterable, Mapping, Sequence
from operator import itemgetter
from typing import Union

from .errors import CapExceededError, ParseError, UnknownIdentifierError
from .names import Name


class _Node(tuple):
    """Immutable syntax node stored as ``(class, *fields)``.

    Keeping the class in slot 0 lets tuple equality and hashing, which run in
    C, distinguish node kinds.
    """

    __slots__ = ()
    _fields: tuple[str, ...] = ()

    def __new__(cls, *args):
        if len(args) != len(cls._fields):
            raise TypeError(f"{cls.__name__} takes {len(cls._fields)} arguments")
        return tuple.__new__(cls, (cls, *args))

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.__match_args__ = cls._fields
        for k, field_name in enumerate(cls._fields, start=1):
            setattr(cls, field_name, property(itemgetter(k)))

    def __getnewargs__(self):
        return tuple(self[1:])

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in zip(self._fields, self[1:]))
        return f"{type(self).__name__}({args})"


class Var(_Node):
    __slots__ = ()
    _fields = ("name",)


class Const(_Node):
    __slots__ = ()
    _fields = ("name",)


Term = Union[Var, Const]


class Eq(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Mem(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Not(_Node):
    __slots__ = ()
    _fields = ("body",)


class And(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Or(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Implies(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Iff(_Node):
    __slots__ = ()
    _fields = ("left", "right")


class Forall(_Node):
    __slots__ = ()
    _fields = ("var", "body")


class Exists(_Node):
    __slots__ = ()
    _fields = ("var", "body")


_new = tuple.__new__

Formula = Union[Eq, Mem, Not, And, Or, Implies, Iff, Forall, Exists]
Atom = (Eq, Mem)
Binary = (And, Or, Implies, Iff)
Quantifier = (Forall, Exists)

CONNECTIVES = ("not", "and", "or", "implies", "iff")
QUANTIFIERS = ("forall", "exists")
_BINARY_BY_KEY = {"and": And, "or": Or, "implies": Implies, "iff": Iff}
_QUANT_BY_KEY = {"forall": Forall, "exists": Exists}


# -- structural helpers ------------------------------------------------------


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, (Not, *Quantifier)):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def constants(f: Formula) -> list[Name]:
    """Name constants in order of first occurrence."""
    out: dict[Name, None] = {}

    def walk(g):
        if isinstance(g, Atom):
            for t in (g.left, g.right):
                if isinstance(t, Const):
                    out[t.name] = None
        elif isinstance(g, (Not, *Quantifier)):
            walk(g.body)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(out)


def map_terms(f: Formula, fn: Callable[[Term, frozenset[str]], Term]) -> Formula:
    """Rebuild ``f`` with every term replaced by ``fn(term, bound_vars)``."""

    def go(g, bound):
        if isinstance(g, Atom):
            return type(g)(fn(g.left, bound), fn(g.right, bound))
        if isinstance(g, Not):
            return Not(go(g.body, bound))
        if isinstance(g, Quantifier):
            return type(g)(g.var, go(g.body, bound | {g.var}))
        return type(g)(go(g.left, bound), go(g.right, bound))

    return go(f, frozenset())


def map_constants(f: Formula, fn: Callable[[Name], Name]) -> Formula:
    """Apply ``fn`` to every name constant, e.g. to transport or retract a formula."""
    memo: dict[Name, Name] = {}

    def sub(t, _bound):
        if isinstance(t, Const):
            if t.name not in memo:
                memo[t.name] = fn(t.name)
            return Const(memo[t.name])
        return t

    return map_terms(f, sub)


def substitute(f: Formula, v: str, x: Name | Term) -> Formula:
    """Replace the free occurrences of ``v`` by the constant ``x``.

    Constants carry no variables, so no capture can occur.
    """
    term = Const(x) if isinstance(x, Name) else x
    if isinstance(term, Var):
        raise TypeError("substitute replaces a variable by a name constant")

    def sub(t, bound):
        if isinstance(t, Var) and t.name == v and v not in bound:
            return term
        return t

    return map_terms(f, sub)


def expand_iff(f: Formula) -> Formula:
    """Rewrite every ``A <-> B`` as ``(A -> B) & (B -> A)``."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(expand_iff(f.body))
    if isinstance(f, Quantifier):
        return type(f)(f.var, expand_iff(f.body))
    left, right = expand_iff(f.left), expand_iff(f.right)
    if isinstance(f, Iff):
        return And(Implies(left, right), Implies(right, left))
    return type(f)(left, right)


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"<->|->|[()=~&|.]|[A-Za-z_][A-Za-z0-9_']*|\S")
_WELL_FORMED = re.compile(r"(?:\s+|<->|->|[()=~&|.]|[A-Za-z_][A-Za-z0-9_']*)*")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_KEYWORDS = frozenset({"in", "forall", "exists"})
_PUNCTUATION = frozenset({"<->", "->", "(", ")", "=", "~", "&", "|", "."})
_NOT_IDENT = _KEYWORDS | _PUNCTUATION | {""}
# binding strength, right-associativity and constructor of each binary connective
_BINARY = {
    "<->": (1, False, Iff),
    "->": (2, True, Implies),
    "|": (3, False, Or),
    "&": (4, False, And),
}


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def _fast_tokens(text: str) -> list[str]:
    # Whitespace split after padding the punctuation the printer glues to
    # neighbours. Any disagreement with the exact tokenizer surfaces as a
    # failed parse, which is then retried exactly.
    return (
        text.replace("(", " ( ").replace(")", " ) ").replace("~", " ~ ").replace(".", " . ").split()
    )


class _Retry(Exception):
    pass


def _fail(text, toks, exact, message, at, error=ParseError):
    if not exact:
        raise _Retry
    tok = toks[at] if at < len(toks) else ""
    if at >= len(toks):
        offset = len(text.rstrip())
    else:
        # offsets are recovered only on the error path
        offset = [m.start() for m in _TOKEN.finditer(text)][at]
    if error is ParseError:
        message = f"{message}, found {repr(tok) if tok else 'end of input'}"
    raise error(message, *_position(text, offset))


# operator-stack markers
_OPEN, _NEG, _QUANT, _BIN = 0, 1, 2, 3


def _parse(text: str, names, free, exact: bool) -> Formula:
    """Operator-precedence parse of the token stream in one loop."""
    if exact:
        if _WELL_FORMED.fullmatch(text) is None:
            bad = next(m for m in _TOKEN.finditer(text) if not _WELL_FORMED.fullmatch(m.group()))
            raise ParseError(f"unexpected character {bad.group()!r}", *_position(text, bad.start()))
        toks = _TOKEN.findall(text)
    else:
        toks = _fast_tokens(text)
    n = len(toks)
    bound: list[str] = []
    consts: dict[str, Const] = {}
    variables: dict[str, Var] = {}
    operands: list = []
    ops: list = []

    def term(at: int) -> Term:
        ident = toks[at] if at < n else ""
        if ident in bound:
            return variables[ident]
        hit = consts.get(ident)
        if hit is not None:
            return hit
        if ident in _NOT_IDENT or not _IDENT.fullmatch(ident):
            _fail(text, toks, exact, "expected an identifier", at)
        if ident in names:
            hit = consts[ident] = Const(names[ident])
            return hit
        if ident in free:
            return Var(ident)
        _fail(text, toks, exact, f"unknown identifier {ident!r}", at, UnknownIdentifierError)

    def reduce_binaries(prec: int, right_assoc: bool) -> None:
        # consume pending binaries binding at least as tightly as the incoming one
        while ops and ops[-1][0] == _BIN:
            top = ops[-1]
            if top[1] < prec or (top[1] == prec and right_assoc):
                return
            ops.pop()
            right = operands.pop()
            cls = top[2]
            operands.append(_new(cls, (cls, operands.pop(), right)))

    def close_scopes(until_paren: bool, at: int) -> None:
        # finish every quantifier body up to the innermost open parenthesis
        while True:
            reduce_binaries(0, False)
            if not ops:
                if until_paren:
                    _fail(text, toks, exact, "unmatched ')'", at)
                return
            kind = ops[-1][0]
            if kind == _OPEN:
                if not until_paren:
                    _fail(text, toks, exact, "expected ')'", at)
                ops.pop()
                return
            _, cls, var = ops.pop()
            bound.pop()
            operands.append(_new(cls, (cls, var, operands.pop())))
            negate()

    def negate() -> None:
        while ops and ops[-1][0] == _NEG:
            ops.pop()
            operands.append(_new(Not, (Not, operands.pop())))

    i = 0
    while True:
        # expecting an operand
        tok = toks[i] if i < n else ""
        if tok == "~":
            ops.append((_NEG,))
            i += 1
            continue
        if tok == "(":
            ops.append((_OPEN,))
            i += 1
            continue
        if tok == "forall" or tok == "exists":
            var = toks[i + 1] if i + 1 < n else ""
            if var in _NOT_IDENT or not _IDENT.fullmatch(var):
                _fail(text, toks, exact, "expected a variable after quantifier", i + 1)
            if (toks[i + 2] if i + 2 < n else "") != ".":
                _fail(text, toks, exact, "expected '.'", i + 2)
            ops.append((_QUANT, Forall if tok == "forall" else Exists, var))
            bound.append(var)
            variables.setdefault(var, Var(var))
            i += 3
            continue
        left = term(i)
        rel = toks[i + 1] if i + 1 < n else ""
        if rel == "in":
            operands.append(_new(Mem, (Mem, left, term(i + 2))))
        elif rel == "=":
            operands.append(_new(Eq, (Eq, left, term(i + 2))))
        else:
            _fail(text, toks, exact, "expected '=' or 'in'", i + 1)
        i += 3
        negate()
        # expecting an operator
        while True:
            tok = toks[i] if i < n else ""
            if tok == ")":
                close_scopes(True, i)
                negate()
                i += 1
                continue
            break
        op = _BINARY.get(tok)
        if op is not None:
            reduce_binaries(op[0], op[1])
            ops.append((_BIN, op[0], op[2]))
            i += 1
            continue
        if tok:
            _fail(text, toks, exact, "unexpected trailing input", i)
        close_scopes(False, i)
        return operands.pop()


def parse_formula(
    text: str, names: Mapping[str, Name] | None = None, free: Iterable[str] = ()
) -> Formula:
    """Parse ``text``; identifiers resolve to bound variables, then ``names``, then ``free``."""
    names = names or {}
    free = frozenset(free)
    try:
        return _parse(text, names, free, exact=False)
    except _Retry:
        return _parse(text, names, free, exact=True)


# -- printer -----------------------------------------------------------------

# binding strength, then the strengths required of the left and right operands
_PRINT_BINARY = {
    Iff: (1, 1, 2, " <-> "),
    Implies: (2, 3, 2, " -> "),
    Or: (3, 3, 4, " | "),
    And: (4, 4, 5, " & "),
}


def format_formula(f: Formula, labels: Mapping[Name, str] | None = None) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    labels = labels or {}

    def term(t: Term) -> str:
        if type(t) is Var:
            return t.name
        return labels.get(t.name) or str(t.name)

    def go(g, prec: int, open_right: bool) -> str:
        # prec: least binding strength printable bare here; open_right: nothing follows.
        info = _PRINT_BINARY.get(type(g))
        if info is not None:
            p, lp, rp, sym = info
            if p < prec:
                return "(" + go(g.left, lp, False) + sym + go(g.right, rp, True) + ")"
            return go(g.left, lp, False) + sym + go(g.right, rp, open_right)
        cls = type(g)
        if cls is Mem:
            return term(g.left) + " in " + term(g.right)
        if cls is Eq:
            return term(g.left) + " = " + term(g.right)
        if cls is Not:
            return "~(" + go(g.body, 0, True) + ")"
        word = "forall " if cls is Forall else "exists "
        text = word + g.var + ". " + go(g.body, 0, True)
        return text if open_right else "(" + text + ")"

    return go(f, 0, True)


# -- enumeration -------------------------------------------------------------


def count_formulas(n_atoms: int, depth: int, n_unary: int, n_binary: int) -> int:
    """Closed form of ``N_d = k + u N_{d-1} + b N_{d-1}^2`` with ``N_0 = k``."""
    n = n_atoms
    for _ in range(depth):
        n = n_atoms + n_unary * n + n_binary * n * n
    return n


def enumerate_formulas(
    atoms: Sequence[Formula],
    depth: int,
    connectives: Iterable[str] = CONNECTIVES,
    variables: Sequence[str] = (),
    max_count: int = 200_000,
) -> list[Formula]:
    """All formulas of depth at most ``depth`` built from ``atoms``.

    ``connectives`` may include ``"forall"``/``"exists"``, which quantify over
    each of ``variables``. Atoms come first, then unary, then binary formations.
    """
    chosen = list(dict.fromkeys(connectives))
    unknown = set(chosen) - set(CONNECTIVES) - set(QUANTIFIERS)
    if unknown:
        raise ValueError(f"unknown connectives {sorted(unknown)}")
    binaries = [_BINARY_BY_KEY[c] for c in chosen if c in _BINARY_BY_KEY]
    quants = [_QUANT_BY_KEY[c] for c in chosen if c in _QUANT_BY_KEY]
    n_unary = ("not" in chosen) + len(quants) * len(variables)
    atoms = list(dict.fromkeys(atoms))
    total = count_formulas(len(atoms), depth, n_unary, len(binaries))
    if total > max_count:
        raise CapExceededError(f"{total} formulas exceed max_count {max_count}")
    level = list(atoms)
    for _ in range(depth):
        nxt = list(atoms)
        if "not" in chosen:
            nxt.extend(Not(f) for f in level)
        for q in quants:
            for v in variables:
                nxt.extend(q(v, f) for f in level)
        for op in binaries:
            nxt.extend(op(f, g) for f in level for g in level)
        level = nxt
    return level
