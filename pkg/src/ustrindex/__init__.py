"""Threshold pattern matching and document listing over uncertain strings.

An uncertain string assigns every position a probability distribution over
characters.  This package builds indexes that report, for a deterministic
pattern and a threshold tau, every position where the pattern occurs with
probability at least tau (`build` / `query`), every sufficiently relevant
document in a collection (`build_listing` / `list_docs`), and an
epsilon-approximate variant with tunable space (`build_links` /
`approx_query`).  Brute-force oracles, a seeded data generator, a text
format, and a persistent container round out the toolkit; `ustr` exposes it
all on the command line.
"""

from __future__ import annotations

from .approx import Link, LinkIndex, RawLinks, approx_items, approx_query, build_links, partition_links
from .container import IndexContainer, build_container, load_container, save_container
from .datagen import GenConfig, generate, generate_collection, sample_world
from .errors import CapacityError, ParseError, ThresholdError
from .factorize import (
    MaximalFactor,
    TransformedText,
    conservation_check,
    maximal_factors,
    prefix_probabilities,
    transform,
)
from .listing import (
    METRICS,
    ListingConfig,
    ListingIndex,
    build_listing,
    list_docs,
    list_items,
    list_with_stats,
    relevance,
)
from .model import (
    Correlation,
    DocumentCollection,
    UncertainString,
    enumerate_worlds,
    occurrence_probability,
    validate,
)
from .oracle import oracle_list, oracle_relevance, oracle_search
from .qindex import (
    IndexConfig,
    QueryStats,
    SubstringIndex,
    build,
    query,
    query_items,
    query_with_stats,
)
from .ustformat import parse_ust, parse_ust_file, serialize_ust, write_ust_file

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Correlation",
    "DocumentCollection",
    "GenConfig",
    "IndexConfig",
    "IndexContainer",
    "Link",
    "LinkIndex",
    "ListingConfig",
    "ListingIndex",
    "METRICS",
    "MaximalFactor",
    "ParseError",
    "QueryStats",
    "RawLinks",
    "SubstringIndex",
    "ThresholdError",
    "TransformedText",
    "UncertainString",
    "approx_items",
    "approx_query",
    "build",
    "build_container",
    "build_links",
    "build_listing",
    "conservation_check",
    "enumerate_worlds",
    "generate",
    "generate_collection",
    "list_docs",
    "list_items",
    "list_with_stats",
    "load_container",
    "maximal_factors",
    "occurrence_probability",
    "oracle_list",
    "oracle_relevance",
    "oracle_search",
    "parse_ust",
    "parse_ust_file",
    "partition_links",
    "prefix_probabilities",
    "query",
    "query_items",
    "query_with_stats",
    "relevance",
    "sample_world",
    "save_container",
    "serialize_ust",
    "transform",
    "validate",
    "write_ust_file",
]
