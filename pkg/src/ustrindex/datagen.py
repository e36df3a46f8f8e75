"""Seeded synthetic uncertain strings derived from a deterministic corpus.

The corpus is carved into windows of roughly normal length; each window
spawns a sample of random small-edit variants, and a chosen fraction of
positions turns uncertain by adopting the per-offset letter frequencies of
those variants.  Everything downstream of the seed is deterministic, so a
config reproduces its dataset byte for byte.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, replace

from .model import Correlation, DocumentCollection, UncertainString

__all__ = ["GenConfig", "generate", "generate_collection", "sample_world"]


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the generator; defaults follow the documented desk-scale setup."""

    theta: float = 0.2
    choices: int = 5
    edit_radius: int = 4
    neighborhood_samples: int = 200
    seed: int = 0
    correlation_rate: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta {self.theta!r} not in [0, 1]")
        if self.choices < 2:
            raise ValueError("choices must be at least 2")
        if self.edit_radius < 1:
            raise ValueError("edit_radius must be at least 1")
        if self.neighborhood_samples < 1:
            raise ValueError("neighborhood_samples must be at least 1")
        if not 0.0 <= self.correlation_rate <= 1.0:
            raise ValueError(f"correlation_rate {self.correlation_rate!r} not in [0, 1]")


def _mutate(rng: random.Random, s: str, radius: int, alphabet: list[str]) -> str:
    out = list(s)
    for _ in range(rng.randint(1, radius)):
        op = rng.choice(("sub", "ins", "del")) if out else "ins"
        if op == "sub":
            out[rng.randrange(len(out))] = rng.choice(alphabet)
        elif op == "ins":
            out.insert(rng.randint(0, len(out)), rng.choice(alphabet))
        else:
            del out[rng.randrange(len(out))]
    return "".join(out)


def _window_lengths(rng: random.Random, n: int) -> list[int]:
    out = []
    left = n
    while left > 0:
        ln = int(round(rng.gauss(32.0, 6.0)))
        ln = min(max(20, min(45, ln)), left)
        out.append(ln)
        left -= ln
    return out


def _inject_correlations(
    rng: random.Random, positions: list[dict[str, float]], rate: float
) -> tuple[Correlation, ...]:
    """Random pairwise correlations whose marginals match the base distribution.

    Each position serves as source or conditioner at most once, which keeps
    possible-world masses summing to 1.
    """
    multi = [q for q in range(1, len(positions) + 1) if len(positions[q - 1]) >= 2]
    used: set[int] = set()
    corrs: list[Correlation] = []
    for q in multi:
        if q in used or rng.random() >= rate:
            continue
        free = [j for j in multi if j != q and j not in used]
        if not free:
            break
        j = rng.choice(free)
        src_sym = rng.choice(sorted(positions[q - 1]))
        cond_sym = rng.choice(sorted(positions[j - 1]))
        b = positions[q - 1][src_sym]
        r = positions[j - 1][cond_sym]
        lo = max(0.0, (b - (1.0 - r)) / r)
        hi = min(1.0, b / r)
        p_plus = lo + (hi - lo) * rng.random()
        p_minus = min(1.0, max(0.0, (b - r * p_plus) / (1.0 - r)))
        corrs.append(Correlation(q, src_sym, j, cond_sym, p_plus, p_minus))
        used.add(q)
        used.add(j)
    return tuple(corrs)


def generate(corpus: str, cfg: GenConfig, name: str = "gen") -> UncertainString:
    """Turn a deterministic corpus into an uncertain string under ``cfg``."""
    if not corpus:
        raise ValueError("corpus is empty")
    rng = random.Random(cfg.seed)
    alphabet = sorted(set(corpus))
    uncertain = [rng.random() < cfg.theta for _ in corpus]

    positions: list[dict[str, float]] = []
    start = 0
    for ln in _window_lengths(rng, len(corpus)):
        window = corpus[start : start + ln]
        variants = [window] + [
            _mutate(rng, window, cfg.edit_radius, alphabet)
            for _ in range(cfg.neighborhood_samples)
        ]
        for k, base_sym in enumerate(window):
            if not uncertain[start + k]:
                positions.append({base_sym: 1.0})
                continue
            counts = Counter(v[k] for v in variants if len(v) > k)
            top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: cfg.choices]
            total = sum(c for _, c in top)
            dist = {sym: c / total for sym, c in top}
            if len(dist) == 1:
                # a unanimous sample still has to yield genuine uncertainty
                (sym,) = dist
                alt = next((c for c in alphabet if c != sym), chr(ord(sym) + 1))
                dist = {sym: 0.9, alt: 0.1}
            positions.append(dist)
        start += ln

    corrs = (
        _inject_correlations(rng, positions, cfg.correlation_rate)
        if cfg.correlation_rate > 0.0
        else ()
    )
    return UncertainString(name, tuple(positions), corrs)


def generate_collection(corpus: str, cfg: GenConfig, docs: int) -> DocumentCollection:
    """Split the corpus into ``docs`` chunks and generate one document per chunk."""
    if docs < 1:
        raise ValueError("docs must be at least 1")
    if docs > len(corpus):
        raise ValueError("more documents than corpus characters")
    base, extra = divmod(len(corpus), docs)
    out = []
    at = 0
    for k in range(docs):
        ln = base + (1 if k < extra else 0)
        chunk = corpus[at : at + ln]
        at += ln
        out.append(generate(chunk, replace(cfg, seed=cfg.seed + k), name=f"d{k + 1}"))
    return DocumentCollection(tuple(out))


def sample_world(u: UncertainString, rng: random.Random) -> str:
    """Draw one possible world position by position (correlations ignored)."""
    chars = []
    for dist in u.positions:
        x = rng.random()
        acc = 0.0
        pick = next(iter(dist))
        for sym, p in dist.items():
            acc += p
            if x < acc:
                pick = sym
                break
        chars.append(pick)
    return "".join(chars)
