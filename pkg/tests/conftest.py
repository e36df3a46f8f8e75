"""Worked examples shared across the suite.

These small strings have hand-checkable probabilities and exercise every
corner the indexes care about: multi-alternative positions, deterministic
positions, a correlated pair, and a three-document collection.
"""

from __future__ import annotations

import pytest

from ustrindex import Correlation, DocumentCollection, UncertainString


@pytest.fixture
def worlds_example() -> UncertainString:
    """Five positions, twelve possible worlds."""
    return UncertainString(
        "S",
        (
            {"a": 0.3, "b": 0.4, "d": 0.3},
            {"a": 0.6, "c": 0.4},
            {"d": 1.0},
            {"a": 0.5, "c": 0.5},
            {"a": 1.0},
        ),
    )


@pytest.fixture
def genome() -> UncertainString:
    """Eleven-position protein-like string; 'AT' occurs at 7 (.12) and 9 (.5)."""
    return UncertainString(
        "genome",
        (
            {"P": 1.0},
            {"S": 0.7, "F": 0.3},
            {"F": 1.0},
            {"P": 1.0},
            {"Q": 0.5, "T": 0.5},
            {"P": 1.0},
            {"A": 0.4, "F": 0.4, "P": 0.2},
            {"I": 0.3, "L": 0.3, "P": 0.1, "T": 0.3},
            {"A": 1.0},
            {"S": 0.5, "T": 0.5},
            {"A": 1.0},
        ),
    )


@pytest.fixture
def correlated() -> UncertainString:
    """Three positions where z at 3 depends on e at 1 (marginal .34)."""
    return UncertainString(
        "corr",
        ({"e": 0.6, "f": 0.4}, {"q": 1.0}, {"z": 0.34, "w": 0.66}),
        (Correlation(3, "z", 1, "e", 0.3, 0.4),),
    )


@pytest.fixture
def collection() -> DocumentCollection:
    """Three documents; only d1 contains 'BF' with probability at least .1."""
    return DocumentCollection(
        (
            UncertainString(
                "d1",
                (
                    {"A": 0.4, "B": 0.3, "F": 0.3},
                    {"B": 0.3, "L": 0.3, "F": 0.3, "J": 0.1},
                    {"F": 0.5, "J": 0.5},
                ),
            ),
            UncertainString(
                "d2",
                (
                    {"A": 0.6, "C": 0.4},
                    {"B": 0.5, "F": 0.3, "J": 0.2},
                    {"B": 0.4, "C": 0.3, "E": 0.2, "F": 0.1},
                ),
            ),
            UncertainString(
                "d3",
                (
                    {"A": 0.4, "F": 0.4, "P": 0.2},
                    {"I": 0.3, "L": 0.3, "P": 0.1, "T": 0.3},
                    {"A": 1.0},
                ),
            ),
        )
    )


@pytest.fixture
def relevance_doc() -> UncertainString:
    """Six positions; 'BFA' occurs at 1, 2 and 4 with probs .045, .09, .048."""
    return UncertainString(
        "rel",
        (
            {"A": 0.4, "B": 0.3, "F": 0.3},
            {"B": 0.3, "L": 0.3, "F": 0.3, "J": 0.1},
            {"A": 0.5, "F": 0.5},
            {"A": 0.6, "B": 0.4},
            {"B": 0.5, "F": 0.3, "J": 0.2},
            {"A": 0.4, "C": 0.3, "E": 0.2, "F": 0.1},
        ),
    )


@pytest.fixture
def short_qs() -> UncertainString:
    """Four positions with a rich factor structure at tau_min around .1."""
    return UncertainString(
        "qs",
        (
            {"Q": 0.7, "S": 0.3},
            {"Q": 0.3, "P": 0.7},
            {"P": 1.0},
            {"A": 0.4, "F": 0.3, "P": 0.2, "Q": 0.1},
        ),
    )
