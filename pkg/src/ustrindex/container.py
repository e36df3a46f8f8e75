"""Self-describing on-disk container for built indexes.

The file is a zip archive holding ``manifest.json`` plus one ``.npy`` entry
per stored array.  Probability tables are written verbatim, so a reopened
index answers queries bit for bit like the one that was saved; derived
structures that are cheap and deterministic to rebuild (suffix array, tree
view, RMQ tables, annotations) are reconstructed from the stored text.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass

import numpy as np

from .approx import LinkIndex, build_links, partition_links
from .factorize import MaximalFactor, TransformedText, build_annotations
from .listing import ListingConfig, ListingIndex, build_listing
from .model import DocumentCollection, UncertainString
from .qindex import IndexConfig, SubstringIndex, build
from .textcore import TreeView, build_suffix_array, rmq_build
from .ustformat import parse_ust, serialize_ust

__all__ = ["FORMAT_VERSION", "IndexContainer", "build_container", "load_container", "save_container"]

FORMAT_VERSION = 1


@dataclass(eq=False)
class IndexContainer:
    """One built index plus the metadata needed to reopen and route queries."""

    kind: str
    tau_min: float
    substring: SubstringIndex | None = None
    listing: ListingIndex | None = None
    links: LinkIndex | None = None
    epsilon: float | None = None
    metric: str | None = None


def build_container(
    docs: list[UncertainString],
    tau_min: float,
    epsilon: float | None = None,
    metric: str | None = None,
    m_short: int | None = None,
    l_max: int | None = None,
    length_cap: int | None = None,
) -> IndexContainer:
    """Build the right kind of index for ``docs``.

    A single document with no metric becomes a substring index (plus a link
    index when ``epsilon`` is given); a metric or several documents build a
    listing index.
    """
    if not docs:
        raise ValueError("no documents to index")
    if metric is not None or len(docs) > 1:
        if epsilon is not None:
            raise ValueError("approximate links apply to single-string indexes only")
        idx = build_listing(
            DocumentCollection(tuple(docs)),
            tau_min,
            metric or "max",
            ListingConfig(m_short=m_short, length_cap=length_cap),
        )
        return IndexContainer("listing", tau_min, listing=idx, metric=idx.metric)
    sub = build(docs[0], tau_min, IndexConfig(m_short=m_short, l_max=l_max, length_cap=length_cap))
    links = None
    if epsilon is not None:
        links = partition_links(build_links(sub.tt, sub.tree, tau_min), epsilon)
    return IndexContainer("substring", tau_min, substring=sub, links=links, epsilon=epsilon)


def _rebuild_factor_table(
    codes: np.ndarray, pos: np.ndarray, cum: np.ndarray
) -> tuple[tuple[int, MaximalFactor], ...]:
    """Recover factor boundaries from the stored text: runs between separators."""
    table: list[tuple[int, MaximalFactor]] = []
    lst = codes.tolist()
    b: int | None = None
    for i, c in enumerate(lst):
        if c >= 0:
            if b is None:
                b = i
        elif b is not None:
            symbols = "".join(map(chr, lst[b:i]))
            table.append((b + 1, MaximalFactor(int(pos[b]), symbols, float(cum[i - 1]))))
            b = None
    return tuple(table)


def save_container(container: IndexContainer, path: str) -> None:
    arrays: dict[str, np.ndarray] = {}
    manifest: dict[str, object] = {
        "format_version": FORMAT_VERSION,
        "kind": container.kind,
        "tau_min": repr(container.tau_min),
        "epsilon": None if container.epsilon is None else repr(container.epsilon),
        "metric": container.metric,
    }

    if container.kind == "substring":
        idx = container.substring
        assert idx is not None
        manifest["source"] = serialize_ust(idx.u)
        manifest["m_short"] = idx.m_short
        manifest["l_max"] = idx.l_max
        manifest["long_depths"] = sorted(idx.long_tables)
        tt = idx.tt
        for i, (values, _) in enumerate(idx.short_tables, start=1):
            arrays[f"short_{i}"] = values
        for depth, (pb, _) in idx.long_tables.items():
            arrays[f"long_{depth}"] = pb
    elif container.kind == "listing":
        lidx = container.listing
        assert lidx is not None
        manifest["source"] = serialize_ust(lidx.collection)
        manifest["m_short"] = lidx.m_short
        tt = lidx.tt
        arrays["doc_of"] = lidx.doc_of
        for i, (values, _) in enumerate(lidx.short_tables, start=1):
            arrays[f"short_{i}"] = values
    else:
        raise ValueError(f"unknown container kind {container.kind!r}")

    arrays["codes"] = tt.codes
    arrays["pos"] = tt.pos
    arrays["cum"] = tt.cum
    if container.links is not None:
        ln = container.links
        arrays["link_origin"] = ln.origin
        arrays["link_pos"] = ln.pos_id
        arrays["link_stored"] = ln.stored
        arrays["link_odepth"] = ln.o_depth
        arrays["link_tdepth"] = ln.t_depth

    # stored uncompressed so file size reflects the structures themselves
    with zipfile.ZipFile(path, "w", zipfile.ZIP_STORED) as zf:
        zf.writestr("manifest.json", json.dumps(manifest, indent=2))
        for name, arr in arrays.items():
            buf = io.BytesIO()
            np.save(buf, arr, allow_pickle=False)
            zf.writestr(f"{name}.npy", buf.getvalue())


def load_container(path: str) -> IndexContainer:
    with zipfile.ZipFile(path) as zf:
        manifest = json.loads(zf.read("manifest.json"))
        version = manifest.get("format_version")
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported container version {version!r}")
        arrays = {
            name[: -len(".npy")]: np.load(io.BytesIO(zf.read(name)), allow_pickle=False)
            for name in zf.namelist()
            if name.endswith(".npy")
        }

    kind = manifest["kind"]
    tau_min = float(manifest["tau_min"])
    docs = parse_ust(manifest["source"])
    codes, pos, cum = arrays["codes"], arrays["pos"], arrays["cum"]
    table = _rebuild_factor_table(codes, pos, cum)
    saidx = build_suffix_array(codes)
    tree = TreeView(saidx)
    m_short = int(manifest["m_short"])

    if kind == "substring":
        (u,) = docs
        tt = TransformedText(codes, pos, cum, tau_min, table, source=u)
        short_tables = [
            (arrays[f"short_{i}"], rmq_build(arrays[f"short_{i}"])) for i in range(1, m_short + 1)
        ]
        long_tables = {
            int(d): (arrays[f"long_{d}"], rmq_build(arrays[f"long_{d}"]))
            for d in manifest["long_depths"]
        }
        idx = SubstringIndex(
            u, tt, saidx, tree, tau_min, m_short, int(manifest["l_max"]), short_tables, long_tables
        )
        links = None
        epsilon = None
        if manifest["epsilon"] is not None:
            epsilon = float(manifest["epsilon"])
            links = LinkIndex(
                tt=tt,
                tree=tree,
                tau_min=tau_min,
                eps=epsilon,
                origin=arrays["link_origin"],
                pos_id=arrays["link_pos"],
                stored=arrays["link_stored"],
                o_depth=arrays["link_odepth"],
                t_depth=arrays["link_tdepth"],
            )
        return IndexContainer("substring", tau_min, substring=idx, links=links, epsilon=epsilon)

    if kind == "listing":
        collection = DocumentCollection(tuple(docs))
        tt = TransformedText(codes, pos, cum, tau_min, table, source=None)
        doc_of = arrays["doc_of"]
        ann = build_annotations(tt, doc_lookup=lambda o: collection.docs[int(doc_of[o])])
        short_tables = [
            (arrays[f"short_{i}"], rmq_build(arrays[f"short_{i}"])) for i in range(1, m_short + 1)
        ]
        lidx = ListingIndex(
            collection,
            manifest["metric"],
            tau_min,
            tt,
            ann,
            doc_of,
            saidx,
            tree,
            m_short,
            short_tables,
        )
        return IndexContainer("listing", tau_min, listing=lidx, metric=lidx.metric)

    raise ValueError(f"unknown container kind {kind!r}")
