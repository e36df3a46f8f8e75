"""Threshold substring search over uncertain strings (Problem 1).

Short patterns are answered by per-length value arrays with recursive
range-max probing, long patterns by block maxima plus elementwise
verification, so reported positions always carry their exact occurrence
probability.  Every stored value is the same left-to-right product the model
computes, which keeps threshold comparisons bitwise faithful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ThresholdError
from .factorize import Annotations, TransformedText, depth_values, transform
from .model import UncertainString, occurrence_probability, validate
from .textcore import (
    RmqIndex,
    SuffixArrayIndex,
    TreeView,
    build_suffix_array,
    rmq_build,
    rmq_query,
    suffix_range,
)

__all__ = [
    "IndexConfig",
    "QueryStats",
    "SubstringIndex",
    "build",
    "query",
    "query_items",
    "query_with_stats",
]

# Cumulative-product ratios agree with the exact in-order product to a few
# ulps per factor character; candidates within this band are re-verified, so
# the shortcut can only cut windows that are clearly below threshold.
_RATIO_SLACK = 1.0 - 1e-9


@dataclass
class QueryStats:
    """Work counters for a single query; fresh per call."""

    rmq_calls: int = 0
    block_scans: int = 0
    outputs: int = 0


@dataclass(frozen=True)
class IndexConfig:
    """Build-time overrides; None picks the documented defaults."""

    m_short: int | None = None
    l_max: int | None = None
    length_cap: int | None = None


@dataclass(eq=False)
class SubstringIndex:
    """Immutable search index over one uncertain string."""

    u: UncertainString
    tt: TransformedText
    saidx: SuffixArrayIndex
    tree: TreeView
    tau_min: float
    m_short: int
    l_max: int
    short_tables: list[tuple[np.ndarray, RmqIndex]] = field(repr=False)
    long_tables: dict[int, tuple[np.ndarray, RmqIndex]] = field(repr=False)


def _dedup_depth(values: np.ndarray, lcp: np.ndarray, orig: np.ndarray, depth: int, n_orig: int) -> np.ndarray:
    """Zero all but the leftmost slot of each original position per depth partition."""
    pid = np.cumsum(lcp < depth)
    valid = np.nonzero(values > 0.0)[0]
    out = np.zeros_like(values)
    if valid.size:
        keys = pid[valid] * np.int64(n_orig + 1) + orig[valid]
        _, first = np.unique(keys, return_index=True)
        keep = valid[first]
        out[keep] = values[keep]
    return out


def build(u: UncertainString, tau_min: float, config: IndexConfig | None = None) -> SubstringIndex:
    """Construct the substring index; the transform's capacity error propagates."""
    problems = validate(u)
    if problems:
        raise ValueError("invalid uncertain string: " + "; ".join(problems))
    if not 0.0 < tau_min <= 1.0:
        raise ValueError(f"tau_min {tau_min!r} not in (0, 1]")
    cfg = config or IndexConfig()

    tt = transform(u, tau_min, cfg.length_cap)
    saidx = build_suffix_array(tt.codes)
    tree = TreeView(saidx)
    n = tt.n
    m_short = cfg.m_short if cfg.m_short is not None else max(1, n.bit_length() - 1)
    if m_short < 1:
        raise ValueError("m_short must be at least 1")
    l_max = cfg.l_max if cfg.l_max is not None else tt.longest_factor

    short_tables: list[tuple[np.ndarray, RmqIndex]] = []
    long_tables: dict[int, tuple[np.ndarray, RmqIndex]] = {}
    if n:
        ann = tt.annotations
        sa0 = saidx.sa - 1
        orig = tt.pos[sa0]

        def window_value(o: int, i: int) -> float:
            return occurrence_probability(u, tt.window_text(o, i), int(tt.pos[o]))

        top = max(m_short, min(l_max, tt.longest_factor))
        for i, v in zip(range(1, top + 1), depth_values(ann, window_value, top)):
            c = v[sa0]
            if i <= m_short:
                c = _dedup_depth(c, saidx.lcp, orig, i, u.n)
                short_tables.append((c, rmq_build(c)))
            else:
                pb = np.maximum.reduceat(c, np.arange(0, n, i))
                long_tables[i] = (pb, rmq_build(pb))
    while len(short_tables) < m_short:
        zeros = np.zeros(n, dtype=np.float64)
        short_tables.append((zeros, rmq_build(zeros)))
    return SubstringIndex(u, tt, saidx, tree, tau_min, m_short, l_max, short_tables, long_tables)


def _rmq_collect(rmq: RmqIndex, values: np.ndarray, sp: int, ep: int, tau: float, stats: QueryStats) -> list[int]:
    """Slots in [sp, ep] with value >= tau, found by threshold-pruned max probes."""
    hits: list[int] = []
    todo = [(sp, ep)]
    while todo:
        l, r = todo.pop()
        if l > r:
            continue
        stats.rmq_calls += 1
        j = rmq_query(rmq, l, r)
        if values[j - 1] < tau:
            continue
        hits.append(j)
        todo.append((l, j - 1))
        todo.append((j + 1, r))
    return hits


def _window_probability(
    tt: TransformedText, ann: Annotations, u: UncertainString, o: int, p: str, floor: float
) -> float:
    """Exact occurrence probability of ``p`` at text offset ``o``, or 0 below ``floor``.

    Correlation-free factors are pre-screened by a cumulative-product ratio
    with slack before the exact recomputation.
    """
    m = len(p)
    if ann.eff_len[o] < m:
        return 0.0
    if not ann.factor_corr[o]:
        denom = tt.cum[o - 1] if o > ann.fstart[o] else 1.0
        if tt.cum[o + m - 1] < floor * denom * _RATIO_SLACK:
            return 0.0
    return occurrence_probability(u, p, int(tt.pos[o]))


def _run(idx: SubstringIndex, p: str, tau: float) -> tuple[list[tuple[int, float]], QueryStats]:
    if not p:
        raise ValueError("pattern is empty")
    if tau < idx.tau_min:
        raise ThresholdError(tau, idx.tau_min)
    stats = QueryStats()
    items: list[tuple[int, float]] = []
    m = len(p)
    if idx.tt.n == 0:
        return items, stats
    rng = suffix_range(idx.saidx, p)
    if rng is None:
        return items, stats
    sp, ep = rng
    sa = idx.saidx.sa
    tt = idx.tt
    ann = tt.annotations

    if m <= idx.m_short:
        values, rmq = idx.short_tables[m - 1]
        for j in _rmq_collect(rmq, values, sp, ep, tau, stats):
            o = sa[j - 1] - 1
            items.append((int(tt.pos[o]), float(values[j - 1])))
    else:
        seen: set[int] = set()

        def scan_slots(lo: int, hi: int) -> None:
            for j in range(lo, hi + 1):
                o = sa[j - 1] - 1
                orig = int(tt.pos[o])
                if orig in seen:
                    continue
                seen.add(orig)
                v = _window_probability(tt, ann, idx.u, o, p, tau)
                if v >= tau:
                    items.append((orig, v))

        table = idx.long_tables.get(m) if m <= idx.l_max else None
        if table is None:
            scan_slots(sp, ep)
        else:
            pb, rmq = table
            bs, be = (sp - 1) // m, (ep - 1) // m
            blo = bs if sp == bs * m + 1 else bs + 1
            bhi = be if ep == (be + 1) * m else be - 1
            if blo > bhi:
                stats.block_scans += 1
                scan_slots(sp, ep)
            else:
                if bs < blo:
                    stats.block_scans += 1
                    scan_slots(sp, blo * m)
                if be > bhi:
                    stats.block_scans += 1
                    scan_slots(bhi * m + m + 1, ep)
                for b in _rmq_collect(rmq, pb, blo + 1, bhi + 1, tau, stats):
                    stats.block_scans += 1
                    scan_slots((b - 1) * m + 1, b * m)

    items.sort()
    stats.outputs = len(items)
    assert len({i for i, _ in items}) == len(items)
    return items, stats


def query_items(idx: SubstringIndex, p: str, tau: float) -> list[tuple[int, float]]:
    """Qualifying (position, probability) pairs in ascending position order."""
    return _run(idx, p, tau)[0]


def query(idx: SubstringIndex, p: str, tau: float) -> list[int]:
    """All original positions where ``p`` occurs with probability >= ``tau``, ascending."""
    return [i for i, _ in _run(idx, p, tau)[0]]


def query_with_stats(idx: SubstringIndex, p: str, tau: float) -> tuple[list[int], QueryStats]:
    """Like query, with the work counters of this call."""
    items, stats = _run(idx, p, tau)
    return [i for i, _ in items], stats
