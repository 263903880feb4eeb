from __future__ import annotations

from pathlib import Path

import pytest

from forcette.errors import ParseError, PresheafError
from forcette.fileformats import (
    format_names,
    format_poset,
    format_presheaf,
    load_names,
    load_poset,
    load_presheaf,
    parse_names,
    parse_poset,
    parse_presheaf,
)
from forcette.names import EMPTY, Name
from forcette.sheaves import dense_topology, is_sheaf

DATA = Path(__file__).resolve().parent.parent / "data"


def test_load_data_files(names):
    P = load_poset(DATA / "p3.poset")
    assert P.name == "P3" and list(P) == ["1", "a", "b"] and P.top == "1"
    assert P.leq("a", "1") and not P.leq("a", "b")
    assert load_names(DATA / "corpus.names", P) == names
    C = load_poset(DATA / "c2.poset")
    assert list(C) == ["1", "p"]


def test_poset_round_trip(P3, C2):
    for P in (P3, C2):
        Q = parse_poset(format_poset(P))
        assert Q.elements == P.elements and Q.name == P.name
        assert all(Q.leq(p, q) == P.leq(p, q) for p in P for q in P)


@pytest.mark.parametrize(
    "text,line,message",
    [
        ("elements 1 a\ntop 1\nle a z", 3, "unknown element 'z'"),
        ("elements 1 a\ntop 1\nlt a 1", 3, "unknown directive 'lt'"),
        ("elements 1 1\ntop 1", 1, "duplicate element identifiers"),
        ("elements 1 a\nelements b\ntop 1", 2, "elements declared twice"),
        ("elements 1 a\ntop 1\nle a", 3, "le takes two elements"),
    ],
)
def test_poset_errors(text, line, message):
    with pytest.raises(ParseError) as info:
        parse_poset(text)
    assert info.value.line == line
    assert message in str(info.value)


def test_poset_missing_lines():
    with pytest.raises(ParseError, match="missing elements"):
        parse_poset("top 1")
    with pytest.raises(ParseError, match="missing top"):
        parse_poset("elements 1")
    with pytest.raises(ParseError, match="not a declared element"):
        parse_poset("elements 1\ntop z")


def test_names_parse(P3):
    table = parse_names("# comment\nname x = {}\nname y = { (x, a), (x,b) }\n", P3)
    assert table["x"] is EMPTY
    assert table["y"] is Name([(EMPTY, "a"), (EMPTY, "b")])


def test_names_round_trip(P3, names):
    assert parse_names(format_names(names), P3) == names


@pytest.mark.parametrize(
    "text,message",
    [
        ("name y = { (x, a) }", "unknown name 'x'"),
        ("name x = {}\nname y = { (x, z) }", "unknown element 'z'"),
        ("name x = {}\nname y = { (x, a) (x, b) }", "malformed pair list"),
        ("name x = {}\nname x = {}", "declared twice"),
        ("name x = ", "expected 'name"),
    ],
)
def test_names_errors(P3, text, message):
    with pytest.raises(ParseError, match=message):
        parse_names(text, P3)


def test_presheaf_files(P3):
    F = load_presheaf(DATA / "product.presheaf", P3)
    assert F.sizes() == (4, 2, 2)
    assert is_sheaf(F, dense_topology(P3))[0]
    G = load_presheaf(DATA / "nonsheaf.presheaf", P3)
    assert not is_sheaf(G, dense_topology(P3))[0]


def test_presheaf_round_trip(P3):
    F = load_presheaf(DATA / "product.presheaf", P3)
    G = parse_presheaf(format_presheaf(F), P3)
    assert G.values == F.values and G.tables == F.tables


@pytest.mark.parametrize(
    "text,message",
    [
        ("set z = 0", "unknown element 'z'"),
        ("set 1 = 0 0", "duplicate values"),
        ("set 1 = 0\nset 1 = 1", "declared twice"),
        ("set 1 = 0\nset a = 0\nmap 1 a : 0-0", "expected 'v->w'"),
        ("set 1 = 0\nset a = 0\nmap 1 a 0->0", "expected 'map"),
        ("frobnicate", "unknown directive"),
    ],
)
def test_presheaf_errors(P3, text, message):
    with pytest.raises(ParseError, match=message):
        parse_presheaf(text, P3)


def test_presheaf_semantic_errors(P3):
    with pytest.raises(PresheafError):
        parse_presheaf("set 1 = 0\nset a = 0\nmap 1 a : 0->9", P3)
