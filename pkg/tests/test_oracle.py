"""Brute-force reference scans: search, relevance aggregation, listing."""

from __future__ import annotations

import pytest

from ustrindex import oracle_list, oracle_relevance, oracle_search


def test_oracle_search_thresholds(genome):
    assert oracle_search(genome, "AT", 0.4) == {9}
    assert oracle_search(genome, "AT", 0.1) == {7, 9}
    assert oracle_search(genome, "AT", 0.6) == set()
    assert oracle_search(genome, "ZZ", 0.1) == set()
    assert oracle_search(genome, "P", 0.9) == {1, 4, 6}


def test_oracle_search_respects_window_limits(genome):
    # a pattern as long as the string has exactly one candidate start
    full = oracle_search(genome, "P" * genome.n, 1e-12)
    assert full == set()
    assert oracle_search(genome, "A", 0.99) == {9, 11}


def test_relevance_metrics(relevance_doc):
    assert oracle_relevance(relevance_doc, "BFA", "max") == pytest.approx(0.09)
    # occurrences .045, .09, .048: sum minus product
    want_or = (0.045 + 0.09 + 0.048) - (0.045 * 0.09 * 0.048)
    assert oracle_relevance(relevance_doc, "BFA", "or") == pytest.approx(want_or)
    assert want_or == pytest.approx(0.1828056, abs=1e-7)
    want_orx = 1.0 - (1.0 - 0.045) * (1.0 - 0.09) * (1.0 - 0.048)
    assert oracle_relevance(relevance_doc, "BFA", "orx") == pytest.approx(want_orx)


def test_relevance_of_single_occurrence_is_the_occurrence(relevance_doc):
    # LA occurs only at 2 (.3 * .5); every metric then reports that value
    for metric in ("max", "or", "orx"):
        assert oracle_relevance(relevance_doc, "LA", metric) == pytest.approx(0.15)


def test_relevance_floor_restricts_support(relevance_doc):
    assert oracle_relevance(relevance_doc, "BFA", "or", floor=0.05) == pytest.approx(0.09)
    assert oracle_relevance(relevance_doc, "BFA", "max", floor=0.5) == 0.0


def test_relevance_rejects_unknown_metric(relevance_doc):
    with pytest.raises(ValueError):
        oracle_relevance(relevance_doc, "B", "sum")


def test_oracle_list_on_collection(collection):
    assert oracle_list(collection, "BF", 0.1, "max") == {"d1"}
    assert oracle_list(collection, "BF", 0.01, "max") == {"d1", "d2"}
    assert oracle_list(collection, "A", 0.3, "max") == {"d1", "d2", "d3"}
    assert oracle_list(collection, "Z", 0.01, "max") == set()
