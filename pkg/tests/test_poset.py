from __future__ import annotations

import itertools

import pytest

from forcette.errors import CapExceededError, ForcingError, UnknownElementError
from forcette.poset import Poset, PosetMap, cohen_poset, is_dense_morphism, one_point_poset
from forcette.corpus import corpus_posets

from oracles import NaivePoset, cohen


def test_leq_examples(P3):
    assert P3.leq("a", "1")
    assert not P3.leq("a", "b")
    assert P3.leq("1", "1")


def test_unknown_element(P3):
    with pytest.raises(UnknownElementError):
        P3.leq("a", "z")
    with pytest.raises(UnknownElementError):
        P3.is_dense(["z"])


def test_compatible_examples(P3, C2):
    assert not P3.compatible("a", "b")
    assert P3.compatible("a", "1")
    assert C2.compatible("p", "1")


def test_density_examples(P3):
    assert P3.is_dense({"a", "b"})
    assert not P3.is_dense({"a"})
    assert P3.is_dense({"1", "a", "b"})
    assert P3.is_predense({"a", "b"})
    assert P3.is_predense({"1"})
    assert not P3.is_predense({"a"})
    assert P3.is_dense_below({"a"}, "a")
    assert not P3.is_dense_below({"a"}, "1")
    assert not P3.is_dense_below(set(), "b")


def test_all_dense_subsets(P3, C2):
    assert P3.all_dense_subsets() == [frozenset("ab"), frozenset({"a", "b", "1"})]
    assert C2.all_dense_subsets() == [frozenset({"p"}), frozenset({"p", "1"})]
    assert one_point_poset().all_dense_subsets() == [frozenset({"1"})]


def test_generic_filters(P3, C2):
    assert P3.generic_filters() == [frozenset({"1", "a"}), frozenset({"1", "b"})]
    assert C2.generic_filters() == [frozenset({"1", "p"})]
    assert one_point_poset().generic_filters() == [frozenset({"1"})]


def test_enumeration_cap():
    big = Poset([str(k) for k in range(13)], [(str(k), "0") for k in range(1, 13)], "0")
    with pytest.raises(CapExceededError):
        big.all_dense_subsets()
    with pytest.raises(CapExceededError):
        big.generic_filters()


def test_separativity(P3, C2):
    assert P3.is_separative()
    assert not C2.is_separative()
    assert one_point_poset().is_separative()


def test_dense_morphism_examples(P3):
    assert is_dense_morphism(PosetMap.identity(P3))[0]
    collapse = PosetMap(P3, P3, {p: "1" for p in P3})
    ok, report = is_dense_morphism(collapse)
    assert not ok
    assert report[0].startswith("incompatibility")


def test_dense_morphism_reports_each_axiom(P3, C2):
    # C2 into P3 sending p to a: monotone, top-preserving, but the image {1,a} is not dense
    m = PosetMap(C2, P3, {"1": "1", "p": "a"})
    ok, report = is_dense_morphism(m)
    assert not ok and report == ["dense-image: image of i is not dense in the target"]
    bad_top = PosetMap(C2, P3, {"1": "a", "p": "a"})
    assert is_dense_morphism(bad_top)[1][0].startswith("top")


def test_map_must_be_total(P3, C2):
    with pytest.raises(UnknownElementError):
        PosetMap(C2, P3, {"1": "1"})
    with pytest.raises(UnknownElementError):
        PosetMap(C2, P3, {"1": "1", "p": "z"})


def test_cohen_examples():
    c11 = cohen_poset(1, 1)
    assert len(c11) == 3
    assert not c11.compatible("c0", "c1")
    assert len(cohen_poset(0, 0)) == 1
    c12 = cohen_poset(1, 2)
    assert len(c12) == 9 and c12.is_separative()
    with pytest.raises(CapExceededError):
        cohen_poset(1, 5)


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (1, 4), (4, 1)])
def test_cohen_separative(n, k):
    assert cohen_poset(n, k).is_separative()


def test_top_must_be_maximum():
    with pytest.raises(ForcingError):
        Poset(["1", "a"], [], "1")


def test_preorders_allowed():
    P = Poset(["1", "a", "b"], [("a", "b"), ("b", "a"), ("a", "1")], "1")
    assert not P.is_antisymmetric()
    assert P.leq("b", "a") and P.leq("a", "b")


@pytest.mark.parametrize("name", list(corpus_posets()))
def test_against_oracle(name):
    P = corpus_posets()[name]
    N = NaivePoset.of(P)
    for p, q in itertools.product(P, P):
        assert P.leq(p, q) == N.leq(p, q)
        assert P.compatible(p, q) == N.compatible(p, q)
    assert {frozenset(G) for G in P.generic_filters()} == set(N.generic_filters())
    assert set(P.all_dense_subsets()) == {D for D in N.subsets() if N.is_dense(D)}


def test_cohen_matches_definition():
    P, N = cohen_poset(1, 2), cohen(1, 2)
    assert list(P) == N.elements
    assert all(P.leq(p, q) == N.leq(p, q) for p in P for q in P)


@pytest.mark.parametrize("name", list(corpus_posets()))
def test_density_properties(name):
    P = corpus_posets()[name]
    for m in range(P.full + 1):
        D = P.members(m)
        if P.is_dense(D):
            assert P.is_predense(D)
            assert all(P.is_dense_below(D, p) for p in P)
    for p, q in itertools.product(P, P):
        assert P.compatible(p, q) == P.compatible(q, p)
        if P.leq(p, q):
            assert P.compatible(p, q)
    for G in P.generic_filters():
        assert P.is_filter(G)
        assert all(G & D for D in P.all_dense_subsets())


def _preorders_with_top(n):
    """Every preorder on ``n`` labelled elements plus a top element."""
    elems = [str(k) for k in range(n)]
    off = [(a, b) for a in elems for b in elems if a != b]
    for k in range(1 << len(off)):
        rel = {pr for j, pr in enumerate(off) if k >> j & 1}
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            yield Poset(["T", *elems], [*rel, *((e, "T") for e in elems)], "T")


def test_generic_filters_pairwise_incomparable():
    # every preorder with a top on at most five elements
    checked = 0
    for n in range(5):
        for P in _preorders_with_top(n):
            gens = P.generic_filters()
            for G, H in itertools.permutations(gens, 2):
                assert not G <= H
            checked += 1
    assert checked == 1 + 1 + 4 + 29 + 355
