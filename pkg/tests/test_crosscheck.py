from __future__ import annotations

import pytest

from forcette.corpus import c2, default_names, p3
from forcette.crosscheck import SUITES, CorpusEntry, carried_names, default_corpus, run_suite
from forcette.names import EMPTY, Name
from forcette.ro import ro_algebra


@pytest.mark.parametrize("suite", SUITES)
def test_empty_corpus(suite):
    report = run_suite(suite, [])
    assert report.ok and report.cases == []
    assert "0 cases" in report.summary()


def test_corpus_without_names():
    report = run_suite("bridge", [CorpusEntry(p3(), {})])
    assert report.ok and not report.cases


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nonsense")


def test_default_corpus():
    assert [e.label for e in default_corpus("bridge")] == ["P3", "C2"]
    assert len(default_corpus("topology")) == 4


def test_carried_names():
    B = ro_algebra(p3())
    carried = carried_names(B, list(default_names(p3()).values()))
    assert carried == [EMPTY, Name([(EMPTY, "{a}")]), Name([(EMPTY, "{1,a,b}")])]


@pytest.mark.parametrize("suite", ["bridge", "boolval", "truth", "filters"])
def test_formula_suites_pass(suite):
    corpus = [CorpusEntry(P, default_names(P)) for P in (p3(), c2())]
    report = run_suite(suite, corpus, depth=1)
    assert report.ok, report.render()
    assert report.cases


def test_bridge_counts():
    report = run_suite("bridge", [CorpusEntry(p3(), default_names(p3()))], depth=1)
    assert [c.label for c in report.cases][0].startswith("P3 p=1 (")
    assert report.notes[0].endswith("(p, formula) pairs checked")


def test_topology_suite_passes():
    report = run_suite("topology")
    assert report.ok, report.render()
    assert any(c.label == "P3 induced along i equals dense" for c in report.cases)


def test_equiv_suite_small():
    report = run_suite("equiv", [CorpusEntry(c2(), default_names(c2()))], max_card=2)
    assert report.ok and len(report.cases) == 15
