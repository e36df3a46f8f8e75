"""Line-oriented text format for uncertain strings.

A file holds one or more blocks.  Each block is::

    ustr <name>
    pos <sym>:<prob> [<sym>:<prob> ...]     # one line per position
    corr <i> <sym_i> <j> <sym_j> <p+> <p->  # optional, any number
    end

``#`` starts a comment anywhere on a line.  Probabilities are decimal
literals and are serialized with ``repr``, so a write/read round trip
reproduces every float bit for bit.
"""

from __future__ import annotations

import os

from .errors import ParseError
from .model import Correlation, DocumentCollection, UncertainString

__all__ = [
    "parse_ust",
    "parse_ust_file",
    "serialize_ust",
    "write_ust_file",
]


def _float(tok: str, what: str, path: str | None, line: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", path=path, line=line) from None


def _int(tok: str, what: str, path: str | None, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", path=path, line=line) from None


def parse_ust(text: str, path: str | None = None) -> list[UncertainString]:
    """Parse UST source into uncertain strings, in file order."""
    out: list[UncertainString] = []
    seen_names: set[str] = set()

    name: str | None = None
    positions: list[dict[str, float]] = []
    corrs: list[Correlation] = []
    corr_keys: set[tuple[int, str]] = set()

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kw = toks[0]

        if kw == "ustr":
            if name is not None:
                raise ParseError("missing 'end' before new block", path=path, line=no)
            if len(toks) != 2:
                raise ParseError("expected 'ustr <name>'", path=path, line=no)
            if toks[1] in seen_names:
                raise ParseError(f"duplicate name {toks[1]!r}", path=path, line=no)
            name = toks[1]
            positions, corrs, corr_keys = [], [], set()

        elif kw == "pos":
            if name is None:
                raise ParseError("'pos' outside a block", path=path, line=no)
            if len(toks) < 2:
                raise ParseError("empty position", path=path, line=no)
            dist: dict[str, float] = {}
            for pair in toks[1:]:
                sym, sep, prob = pair.partition(":")
                if not sep or len(sym) != 1 or not prob:
                    raise ParseError(f"expected '<sym>:<prob>', got {pair!r}", path=path, line=no)
                if sym in dist:
                    raise ParseError(f"duplicate symbol {sym!r}", path=path, line=no)
                p = _float(prob, "probability", path, no)
                if p != 0.0:
                    dist[sym] = p
            if not dist:
                raise ParseError("position has no nonzero alternatives", path=path, line=no)
            positions.append(dist)

        elif kw == "corr":
            if name is None:
                raise ParseError("'corr' outside a block", path=path, line=no)
            if len(toks) != 7:
                raise ParseError(
                    "expected 'corr <i> <sym_i> <j> <sym_j> <p+> <p->'", path=path, line=no
                )
            i = _int(toks[1], "position", path, no)
            j = _int(toks[3], "position", path, no)
            if len(toks[2]) != 1 or len(toks[4]) != 1:
                raise ParseError("correlation symbols must be single characters", path=path, line=no)
            if (i, toks[2]) in corr_keys:
                raise ParseError(f"duplicate correlation for ({i}, {toks[2]!r})", path=path, line=no)
            corr_keys.add((i, toks[2]))
            corrs.append(
                Correlation(
                    i,
                    toks[2],
                    j,
                    toks[4],
                    _float(toks[5], "p_plus", path, no),
                    _float(toks[6], "p_minus", path, no),
                )
            )

        elif kw == "end":
            if name is None:
                raise ParseError("'end' outside a block", path=path, line=no)
            if not positions:
                raise ParseError(f"block {name!r} has no positions", path=path, line=no)
            try:
                out.append(UncertainString(name, tuple(positions), tuple(corrs)))
            except ValueError as exc:
                raise ParseError(str(exc), path=path, line=no) from None
            seen_names.add(name)
            name = None

        else:
            raise ParseError(f"unknown directive {kw!r}", path=path, line=no)

    if name is not None:
        raise ParseError(f"unterminated block {name!r}", path=path)
    if not out:
        raise ParseError("no blocks found", path=path)
    return out


def parse_ust_file(path: str | os.PathLike[str]) -> list[UncertainString]:
    with open(path, encoding="utf-8") as fh:
        return parse_ust(fh.read(), path=os.fspath(path))


def serialize_ust(items: UncertainString | DocumentCollection | list[UncertainString]) -> str:
    """Render one or more uncertain strings as UST source."""
    if isinstance(items, UncertainString):
        docs: tuple[UncertainString, ...] = (items,)
    elif isinstance(items, DocumentCollection):
        docs = items.docs
    else:
        docs = tuple(items)
    lines: list[str] = []
    for u in docs:
        lines.append(f"ustr {u.name}")
        for dist in u.positions:
            lines.append("pos " + " ".join(f"{s}:{p!r}" for s, p in dist.items()))
        for c in u.correlations:
            lines.append(
                f"corr {c.src_pos} {c.src_sym} {c.cond_pos} {c.cond_sym} {c.p_plus!r} {c.p_minus!r}"
            )
        lines.append("end")
    return "\n".join(lines) + "\n"


def write_ust_file(
    path: str | os.PathLike[str],
    items: UncertainString | DocumentCollection | list[UncertainString],
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_ust(items))
