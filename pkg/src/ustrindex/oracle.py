"""Brute-force reference answers computed straight from the probability model.

These scans exist to check the indexes and are never called by them.  They
use only model-level operations, so a bug in the index machinery cannot leak
into its own verification.
"""

from __future__ import annotations

from .model import DocumentCollection, UncertainString, occurrence_probability

__all__ = ["oracle_list", "oracle_relevance", "oracle_search"]

METRICS = ("max", "or", "orx")


def oracle_search(u: UncertainString, p: str, tau: float) -> set[int]:
    """All 1-based starts where ``p`` occurs with probability >= ``tau``."""
    m = len(p)
    return {
        i
        for i in range(1, u.n - m + 2)
        if occurrence_probability(u, p, i) >= tau
    }


def _aggregate(values: list[float], metric: str) -> float:
    """Combine per-occurrence probabilities in ascending position order."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if not values:
        return 0.0
    if metric == "max":
        return max(values)
    if metric == "or":
        # single occurrence: the OR of one event is the event itself
        if len(values) == 1:
            return values[0]
        s = 0.0
        prod = 1.0
        for v in values:
            s += v
            prod *= v
        return s - prod
    comp = 1.0
    for v in values:
        comp *= 1.0 - v
    return 1.0 - comp


def oracle_relevance(d: UncertainString, p: str, metric: str, floor: float = 0.0) -> float:
    """Relevance of document ``d`` for ``p`` by exhaustive occurrence scan.

    With ``floor`` 0 every occurrence of positive probability contributes
    (full support); a positive floor restricts to occurrences at or above it.
    """
    m = len(p)
    values = []
    for i in range(1, d.n - m + 2):
        v = occurrence_probability(d, p, i)
        if v > 0.0 and v >= floor:
            values.append(v)
    return _aggregate(values, metric)


def oracle_list(
    collection: DocumentCollection,
    p: str,
    tau: float,
    metric: str,
    floor: float = 0.0,
) -> set[str]:
    """Names of all documents whose relevance for ``p`` reaches ``tau``."""
    return {
        d.name
        for d in collection.docs
        if oracle_relevance(d, p, metric, floor=floor) >= tau
    }
