"""Seeded random instance builders shared across the test modules."""

from __future__ import annotations

import random

from ustrindex import UncertainString
from ustrindex.datagen import _inject_correlations


def random_distribution(rng: random.Random, alphabet: str, max_choices: int) -> dict[str, float]:
    k = rng.randint(2, min(max_choices, len(alphabet)))
    syms = rng.sample(alphabet, k)
    weights = [rng.random() + 0.05 for _ in syms]
    total = sum(weights)
    return {s: w / total for s, w in zip(syms, weights)}


def random_ustring(
    rng: random.Random,
    n: int | None = None,
    alphabet: str = "abcd",
    theta: float = 0.5,
    max_choices: int = 3,
    correlation_rate: float = 0.0,
    name: str = "rnd",
) -> UncertainString:
    """A random uncertain string; correlations, when asked for, keep worlds summing to 1."""
    if n is None:
        n = rng.randint(4, 40)
    positions: list[dict[str, float]] = []
    for _ in range(n):
        if rng.random() < theta:
            positions.append(random_distribution(rng, alphabet, max_choices))
        else:
            positions.append({rng.choice(alphabet): 1.0})
    corrs = _inject_correlations(rng, positions, correlation_rate) if correlation_rate > 0 else ()
    return UncertainString(name, tuple(positions), corrs)
