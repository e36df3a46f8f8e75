"""Substring index against the oracle, including overrides and work counters."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from ustrindex import (
    IndexConfig,
    ThresholdError,
    UncertainString,
    build,
    occurrence_probability,
    oracle_search,
    query,
    query_items,
    query_with_stats,
    sample_world,
)

from helpers import random_ustring


def test_worked_example_queries(genome):
    idx = build(genome, 0.1)
    assert query(idx, "AT", 0.4) == [9]
    items = query_items(idx, "AT", 0.1)
    assert [i for i, _ in items] == [7, 9]
    for i, v in items:
        assert v == occurrence_probability(genome, "AT", i)
    assert query(idx, "ATA", 0.2) == [9]
    assert query(idx, "Z", 0.1) == []


def test_build_validates_inputs():
    bad = UncertainString("bad", ({"a": 0.5, "b": 0.2},))
    with pytest.raises(ValueError, match="invalid uncertain string"):
        build(bad, 0.5)
    ok = UncertainString("ok", ({"a": 1.0},))
    with pytest.raises(ValueError):
        build(ok, 0.0)
    with pytest.raises(ValueError):
        build(ok, 1.5)
    with pytest.raises(ValueError):
        build(ok, 0.5, IndexConfig(m_short=0))


def test_query_guards(genome):
    idx = build(genome, 0.1)
    with pytest.raises(ThresholdError) as exc:
        query(idx, "AT", 0.05)
    assert exc.value.tau == 0.05 and exc.value.tau_min == 0.1
    with pytest.raises(ValueError):
        query(idx, "", 0.5)


def test_deterministic_string_is_plain_substring_search():
    s = "abcabcabcabc"
    u = UncertainString("det", tuple({c: 1.0} for c in s))
    idx = build(u, 0.9, IndexConfig(m_short=2))
    for m in range(1, 11):
        for start in range(len(s) - m + 1):
            p = s[start : start + m]
            want = sorted(i + 1 for i in range(len(s) - m + 1) if s[i : i + m] == p)
            assert query(idx, p, 0.9) == want
    assert query(idx, "cab", 1.0) == [3, 6, 9]
    assert query(idx, "abd", 0.9) == []


@settings(max_examples=70, deadline=None)
@given(st.integers(0, 10**6))
def test_query_matches_oracle(seed):
    rng = random.Random(seed)
    u = random_ustring(rng, n=rng.randint(4, 18), correlation_rate=0.3)
    tau_min = rng.choice((0.1, 0.2, 0.3))
    config = rng.choice(
        (None, IndexConfig(m_short=1), IndexConfig(m_short=2, l_max=6), IndexConfig(l_max=3))
    )
    idx = build(u, tau_min, config)

    w = sample_world(u, rng)
    patterns = {
        w[s : s + m]
        for m in (1, 2, 3, 5, 8)
        if m <= len(w)
        for s in (0, len(w) // 2, len(w) - m)
    }
    patterns.add("zq")
    for p in sorted(patterns):
        for tau in (tau_min, min(1.0, 2 * tau_min), 0.9):
            got = query(idx, p, tau)
            assert got == sorted(oracle_search(u, p, tau))
            items = query_items(idx, p, tau)
            assert [i for i, _ in items] == got
            for i, v in items:
                assert v == occurrence_probability(u, p, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_short_queries_stay_within_the_probe_budget(seed):
    rng = random.Random(seed)
    u = random_ustring(rng, n=rng.randint(6, 20), correlation_rate=0.2)
    idx = build(u, 0.2)
    w = sample_world(u, rng)
    for m in range(1, min(idx.m_short, len(w)) + 1):
        s = rng.randrange(len(w) - m + 1)
        positions, stats = query_with_stats(idx, w[s : s + m], 0.2)
        assert stats.outputs == len(positions)
        assert stats.rmq_calls <= 2 * len(positions) + 1
        assert sorted(set(positions)) == positions
