from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcette.corpus import default_names, p3
from forcette.errors import CapExceededError, ParseError, UnknownIdentifierError
from forcette.formula import (
    And,
    Const,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    Mem,
    Not,
    Or,
    Var,
    constants,
    count_formulas,
    depth,
    enumerate_formulas,
    expand_iff,
    format_formula,
    free_vars,
    is_closed,
    map_constants,
    parse_formula,
    substitute,
)


@pytest.fixture
def c(names):
    return {k: Const(v) for k, v in names.items()}


@pytest.fixture
def labels(names):
    return {v: k for k, v in names.items()}


def test_parse_examples(names, c):
    assert parse_formula("n0 in n1", names) == Mem(c["n0"], c["n1"])
    assert parse_formula("forall x. ~(x in n0)", names) == Forall("x", Not(Mem(Var("x"), c["n0"])))
    assert parse_formula("n1 = n2 -> n1 = n2 | n0 in n3", names) == Implies(
        Eq(c["n1"], c["n2"]), Or(Eq(c["n1"], c["n2"]), Mem(c["n0"], c["n3"]))
    )


def test_precedence(names, c):
    a, b = Mem(c["n0"], c["n1"]), Eq(c["n1"], c["n2"])
    assert parse_formula("n0 in n1 & n1 = n2 | n0 in n1", names) == Or(And(a, b), a)
    assert parse_formula("n0 in n1 -> n1 = n2 -> n0 in n1", names) == Implies(a, Implies(b, a))
    assert parse_formula("n0 in n1 <-> n1 = n2 <-> n0 in n1", names) == Iff(Iff(a, b), a)
    assert parse_formula("~n0 in n1 & n1 = n2", names) == And(Not(a), b)
    body = And(Mem(Var("x"), c["n1"]), b)
    assert parse_formula("forall x. x in n1 & n1 = n2", names) == Forall("x", body)
    assert parse_formula("(forall x. x in n1) & n1 = n2", names) == And(Forall("x", Mem(Var("x"), c["n1"])), b)


def test_print_examples(c, labels):
    assert format_formula(Mem(c["n0"], c["n1"]), labels) == "n0 in n1"
    assert format_formula(Not(Eq(c["n0"], c["n0"])), labels) == "~(n0 = n0)"
    f = And(Forall("x", Mem(Var("x"), c["n1"])), Eq(c["n0"], c["n0"]))
    assert format_formula(f, labels) == "(forall x. x in n1) & n0 = n0"
    g = Implies(Implies(Mem(c["n0"], c["n1"]), Mem(c["n0"], c["n1"])), Mem(c["n0"], c["n1"]))
    assert format_formula(g, labels) == "(n0 in n1 -> n0 in n1) -> n0 in n1"


def test_print_without_labels(names, c):
    assert format_formula(Mem(c["n0"], c["n1"])) == "{} in {({},a)}"


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("n0 in", 1, 6),
        ("(n0 in n1", 1, 10),
        ("n0 in n1 &", 1, 11),
        ("forall x ~(x in n0)", 1, 10),
        ("n0 in n1\n& & n0 = n0", 2, 3),
        ("n0 in n1 n2", 1, 10),
    ],
)
def test_syntax_error_positions(names, text, line, column):
    with pytest.raises(ParseError) as info:
        parse_formula(text, names)
    assert (info.value.line, info.value.column) == (line, column)


def test_unknown_identifier(names):
    with pytest.raises(UnknownIdentifierError) as info:
        parse_formula("n0 in n9", names)
    assert info.value.column == 7
    with pytest.raises(UnknownIdentifierError):
        parse_formula("x in n0", names)
    assert parse_formula("x in n0", names, free=["x"]) == Mem(Var("x"), Const(names["n0"]))


def test_bound_variable_shadows_name(names):
    f = parse_formula("forall n0. n0 in n1", names)
    assert f == Forall("n0", Mem(Var("n0"), Const(names["n1"])))


def test_substitute_examples(names, c):
    x = Var("x")
    assert substitute(Mem(x, c["n1"]), "x", names["n0"]) == Mem(c["n0"], c["n1"])
    bound = Forall("x", Mem(x, c["n1"]))
    assert substitute(bound, "x", names["n0"]) == bound
    assert substitute(Exists("y", Eq(x, Var("y"))), "x", names["n3"]) == Exists("y", Eq(c["n3"], Var("y")))


def test_substitution_commutes_with_printing(names, labels):
    for text in ["x in n1", "exists y. x = y & y in n2", "~(x = x) | n0 in x"]:
        f = parse_formula(text, names, free=["x"])
        g = substitute(f, "x", names["n3"])
        expected = format_formula(f, labels).replace("x ", "n3 ").replace(" x", " n3").replace("(x", "(n3")
        assert format_formula(g, labels) == expected


def test_free_vars_and_constants(names):
    f = parse_formula("forall x. x in n1 & y = n3", names, free=["y"])
    assert free_vars(f) == {"y"}
    assert not is_closed(f)
    assert constants(f) == [names["n1"], names["n3"]]
    assert depth(f) == 2
    g = map_constants(f, lambda n: names["n0"])
    assert constants(g) == [names["n0"]]


def test_expand_iff(c):
    a, b = Mem(c["n0"], c["n1"]), Eq(c["n0"], c["n2"])
    assert expand_iff(Iff(a, b)) == And(Implies(a, b), Implies(b, a))
    assert expand_iff(Not(Iff(a, a))) == Not(And(Implies(a, a), Implies(a, a)))


def test_enumeration_examples(c):
    a, b = Mem(c["n0"], c["n1"]), Eq(c["n1"], c["n2"])
    assert enumerate_formulas([a], 0) == [a]
    assert enumerate_formulas([a], 1, connectives=["not"]) == [a, Not(a)]
    fs = enumerate_formulas([a, b], 1)
    assert len(fs) == count_formulas(2, 1, 1, 4) == 2 + 2 + 4 * 4
    assert len(set(fs)) == len(fs)
    two = enumerate_formulas([a, b], 2)
    assert len(set(two)) == len(two) == count_formulas(2, 2, 1, 4)


def test_enumeration_with_quantifiers(c):
    a = Mem(Var("x"), c["n1"])
    fs = enumerate_formulas([a], 1, connectives=["not", "forall", "exists"], variables=["x", "y"])
    assert len(fs) == count_formulas(1, 1, 5, 0) == 6
    assert Exists("y", a) in fs


def test_enumeration_cap(c):
    with pytest.raises(CapExceededError):
        enumerate_formulas([Mem(c["n0"], c["n1"])], 4)
    with pytest.raises(ValueError):
        enumerate_formulas([], 1, connectives=["xor"])


def test_round_trip_depth_three(names, labels):
    fs = enumerate_formulas([parse_formula("n0 in n1", names)], 3)
    assert len(fs) == 91_356
    for f in fs[::7]:
        text = format_formula(f, labels)
        assert parse_formula(text, names) == f


def formulas(names):
    consts = [Const(v) for v in names.values()]
    variables = ["x", "y"]
    terms = st.sampled_from(consts + [Var(v) for v in variables])
    atoms = st.builds(Mem, terms, terms) | st.builds(Eq, terms, terms)

    def extend(kids):
        return (
            st.builds(Not, kids)
            | st.builds(And, kids, kids)
            | st.builds(Or, kids, kids)
            | st.builds(Implies, kids, kids)
            | st.builds(Iff, kids, kids)
            | st.builds(Forall, st.sampled_from(variables), kids)
            | st.builds(Exists, st.sampled_from(variables), kids)
        )

    return st.recursive(atoms, extend, max_leaves=12).filter(lambda f: depth(f) <= 4)


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_round_trip_random(data):
    names = default_names(p3())
    labels = {v: k for k, v in names.items()}
    f = data.draw(formulas(names))
    text = format_formula(f, labels)
    g = parse_formula(text, names, free=["x", "y"])
    assert g == f
    assert format_formula(g, labels) == text
