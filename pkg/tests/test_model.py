"""Probability model: validation, world enumeration, occurrence arithmetic."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ustrindex import (
    CapacityError,
    Correlation,
    DocumentCollection,
    UncertainString,
    enumerate_worlds,
    occurrence_probability,
    validate,
)

from helpers import random_ustring


def test_validate_accepts_fixtures(worlds_example, genome, correlated, collection):
    for u in (worlds_example, genome, correlated, *collection.docs):
        assert validate(u) == []


def test_validate_flags_structural_problems():
    assert validate(UncertainString("x", ())) == ["string is empty"]
    issues = validate(UncertainString("x", ({},)))
    assert issues == ["position 1: no alternatives"]
    issues = validate(UncertainString("x", ({"ab": 1.0},)))
    assert any("not a single character" in s for s in issues)
    issues = validate(UncertainString("x", ({"a": 0.0, "b": 1.0},)))
    assert any("not in (0, 1]" in s for s in issues)
    issues = validate(UncertainString("x", ({"a": 0.5, "b": 0.2},)))
    assert any("sum to 0.7" in s for s in issues)


def test_validate_flags_correlation_problems():
    base = ({"a": 0.5, "b": 0.5}, {"c": 0.5, "d": 0.5})

    def issues(corr):
        return validate(UncertainString("x", base, (corr,)))

    assert any("out of range" in s for s in issues(Correlation(3, "a", 1, "a", 0.5, 0.5)))
    assert any("own position" in s for s in issues(Correlation(1, "a", 1, "b", 0.5, 0.5)))
    assert any("absent" in s for s in issues(Correlation(1, "z", 2, "c", 0.5, 0.5)))
    assert any("no probability" in s for s in issues(Correlation(1, "a", 2, "z", 0.5, 0.5)))
    assert any("not in [0, 1]" in s for s in issues(Correlation(1, "a", 2, "c", 1.5, 0.5)))
    dup = validate(
        UncertainString(
            "x",
            base,
            (Correlation(1, "a", 2, "c", 0.5, 0.5), Correlation(1, "a", 2, "d", 0.4, 0.6)),
        )
    )
    assert any("more than one correlation" in s for s in dup)


def test_world_enumeration_counts_and_masses(worlds_example):
    worlds = enumerate_worlds(worlds_example)
    assert len(worlds) == 12
    table = dict(worlds)
    assert table["aadaa"] == pytest.approx(0.09)
    assert table["badaa"] == pytest.approx(0.12)
    assert table["dcdca"] == pytest.approx(0.06)
    assert math.isclose(sum(table.values()), 1.0, abs_tol=1e-12)
    assert [w for w, _ in worlds] == sorted(w for w, _ in worlds)


def test_world_enumeration_floor_filters(worlds_example):
    everything = enumerate_worlds(worlds_example)
    floored = enumerate_worlds(worlds_example, floor=0.1)
    assert floored == [(w, p) for w, p in everything if p >= 0.1]
    assert all(p >= 0.1 for _, p in floored)


def test_world_enumeration_guard():
    long_u = UncertainString("long", tuple({"a": 0.5, "b": 0.5} for _ in range(13)))
    with pytest.raises(CapacityError):
        enumerate_worlds(long_u)
    # a positive floor caps the output, so the same string is fine
    some = enumerate_worlds(long_u, floor=0.5**13)
    assert len(some) == 2**13


def test_occurrence_probability_values(genome):
    assert occurrence_probability(genome, "AT", 7) == pytest.approx(0.12)
    assert occurrence_probability(genome, "AT", 9) == pytest.approx(0.5)
    assert occurrence_probability(genome, "PFP", 2) == 0.0
    assert occurrence_probability(genome, "", 1) == 1.0


def test_occurrence_probability_window_bounds(genome):
    with pytest.raises(ValueError):
        occurrence_probability(genome, "AT", 0)
    with pytest.raises(ValueError):
        occurrence_probability(genome, "AT", 11)


def test_occurrence_probability_correlation_cases(correlated):
    # conditioner inside the window picks the matching conditional
    assert occurrence_probability(correlated, "eqz", 1) == pytest.approx(0.6 * 0.3)
    assert occurrence_probability(correlated, "fqz", 1) == pytest.approx(0.4 * 0.4)
    # conditioner outside the window marginalizes
    assert occurrence_probability(correlated, "qz", 2) == pytest.approx(0.34)
    assert occurrence_probability(correlated, "z", 3) == pytest.approx(0.34)
    # windows not touching the source are plain products
    assert occurrence_probability(correlated, "eq", 1) == pytest.approx(0.6)


def test_marginal_matches_total_probability():
    c = Correlation(3, "z", 1, "e", 0.3, 0.4)
    assert c.marginal(0.6) == pytest.approx(0.34)
    assert c.marginal(1.0) == 0.3
    assert c.marginal(0.0) == 0.4


def test_by_source_keeps_first_on_duplicates():
    u = UncertainString(
        "dup",
        ({"a": 0.5, "b": 0.5}, {"c": 0.5, "d": 0.5}),
        (Correlation(1, "a", 2, "c", 0.5, 0.5), Correlation(1, "a", 2, "d", 0.1, 0.9)),
    )
    assert u.by_source[(1, "a")].p_plus == 0.5


def test_pr_reads_base_distribution(worlds_example):
    assert worlds_example.pr(1, "b") == 0.4
    assert worlds_example.pr(1, "z") == 0.0


def test_collection_rejects_duplicate_names(worlds_example):
    with pytest.raises(ValueError):
        DocumentCollection((worlds_example, worlds_example))
    coll = DocumentCollection((worlds_example,))
    assert len(coll) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_occurrence_equals_world_mass_without_correlations(seed):
    """On independent strings an occurrence is exactly the mass of matching worlds."""
    rng = random.Random(seed)
    u = random_ustring(rng, n=rng.randint(2, 7))
    worlds = enumerate_worlds(u)
    start = rng.randint(1, u.n)
    m = rng.randint(1, u.n - start + 1)
    pattern = "".join(rng.choice(sorted(u.positions[start - 1 + t])) for t in range(m))
    mass = sum(p for w, p in worlds if w[start - 1 : start - 1 + m] == pattern)
    assert math.isclose(occurrence_probability(u, pattern, start), mass, rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_correlated_worlds_sum_to_one(seed):
    """Marginal-consistent correlations keep the world masses a distribution."""
    rng = random.Random(seed)
    u = random_ustring(rng, n=rng.randint(3, 8), correlation_rate=0.6)
    worlds = enumerate_worlds(u)
    assert math.isclose(sum(p for _, p in worlds), 1.0, abs_tol=1e-9)
