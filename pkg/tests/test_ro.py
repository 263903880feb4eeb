from __future__ import annotations

import itertools

import pytest

from forcette.corpus import corpus_posets
from forcette.errors import ForcingError
from forcette.poset import is_dense_morphism
from forcette.ro import (
    ba_laws_report,
    canonical_morphism,
    closure,
    inclusion_morphism,
    interior,
    open_sets,
    ro_algebra,
)

from oracles import NaiveAlgebra, NaivePoset


def test_b4_carrier(B4):
    assert B4.labels == ("{}", "{a}", "{b}", "{1,a,b}")
    assert B4.carrier == [frozenset(), frozenset("a"), frozenset("b"), frozenset("1ab")]
    assert B4.labels[B4.zero] == "{}" and B4.labels[B4.one] == "{1,a,b}"


def test_c2_carrier(C2):
    B = ro_algebra(C2)
    assert B.labels == ("{}", "{1,p}")


def test_b4_tables(B4):
    a, b = B4.index("{a}"), B4.index("{b}")
    assert B4.labels[B4.join(a, b)] == "{1,a,b}"
    assert B4.meet(a, b) == B4.zero
    assert B4.complement(a) == b
    assert len(B4.atoms()) == 2


def test_interior_closure(P3):
    assert closure(P3, {"a"}) == frozenset({"a", "1"})
    assert interior(P3, {"a", "1"}) == frozenset({"a"})
    assert open_sets(P3) == [frozenset(), frozenset("a"), frozenset("b"), frozenset("ab"), frozenset("1ab")]


def test_canonical_morphism(P3, B4):
    i = canonical_morphism(P3, B4)
    assert {p: i(p) for p in P3} == {"1": "{1,a,b}", "a": "{a}", "b": "{b}"}
    assert is_dense_morphism(i)[0]


def test_canonical_morphism_c2_collapses(C2):
    i = canonical_morphism(C2)
    assert i("p") == i("1") == "{1,p}"
    assert is_dense_morphism(i)[0]


def test_wrong_algebra(P3, C2):
    with pytest.raises(ForcingError):
        canonical_morphism(C2, ro_algebra(P3))


def test_find_rejects_irregular(B4):
    with pytest.raises(ForcingError):
        B4.find({"a", "b"})


def test_ba_laws_pass(B4):
    report = ba_laws_report(B4)
    assert report.ok and len(report.cases) == 10


def test_ba_laws_detect_corruption(B4):
    join = [list(row) for row in B4._join]
    a, b = B4.index("{a}"), B4.index("{b}")
    join[a][b] = a
    report = ba_laws_report(B4.with_tables(join=join))
    assert not report.ok
    assert any("u+v = v+u" in c.label for c in report.failures)


@pytest.mark.parametrize("name", list(corpus_posets()))
def test_against_oracle(name):
    P = corpus_posets()[name]
    B, N = ro_algebra(P), NaiveAlgebra(NaivePoset.of(P))
    assert sorted(B.carrier, key=sorted) == sorted(N.carrier, key=sorted)
    assert [B.label(u) for u in range(len(B))] == list(B.labels)
    for u, v in itertools.product(range(len(B)), repeat=2):
        U, V = B.element(u), B.element(v)
        assert B.element(B.join(u, v)) == N.join([U, V])
        assert B.element(B.meet(u, v)) == N.meet([U, V])
    for u in range(len(B)):
        assert B.element(B.complement(u)) == N.comp(B.element(u))
    i = canonical_morphism(P, B)
    for p in P:
        assert i(p) == N.label(N.cone(p))


@pytest.mark.parametrize("name", list(corpus_posets()))
def test_algebra_properties(name):
    P = corpus_posets()[name]
    B = ro_algebra(P)
    assert ba_laws_report(B).ok
    n = len(B)
    assert n & (n - 1) == 0 and 1 << len(B.atoms()) == n
    for u in range(n):
        assert B.intcl(B.masks[u]) == B.masks[u]
        assert B.complement(B.complement(u)) == u
    for u, v in itertools.product(range(n), repeat=2):
        assert B.complement(B.join(u, v)) == B.meet(B.complement(u), B.complement(v))
        assert B.complement(B.meet(u, v)) == B.join(B.complement(u), B.complement(v))
    for p in P:
        assert B.cone_value(p) != B.zero


def test_inclusion_morphism(B4):
    e = inclusion_morphism(B4)
    assert len(e.source) == 3 and len(e.target) == 4
    assert e.source.name == "RO(P3)\\{0}"
    assert all(e(q) == q for q in e.source)
