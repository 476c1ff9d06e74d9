"""Exports to common graph-exchange formats, plus a reader for round-trip
checks.

Two output shapes are supported: the METIS graph format (undirected view,
1-based indices, header ``n m_pairs``) for partitioner handoff, and a plain
directed edge list (``source target model values...``) for graph-analysis
toolkits.
"""

from __future__ import annotations

import numpy as np

from .model import NONE_MODEL, Network
from .textio import FormatError, format_float, format_int, parse_int, split_lines


def undirected_rows(net: Network) -> list[np.ndarray]:
    """Per global vertex, its neighbors in ascending order (both directions)."""
    rows = []
    for block in net.partitions:
        for row in block.adjacency:
            rows.append(np.sort(row))
    return rows


def export_metis(net: Network) -> str:
    """Render the undirected adjacency in METIS graph format.

    Header is ``n m`` where m counts adjacent vertex pairs; vertex ids are
    1-based per the METIS convention.
    """
    rows = undirected_rows(net)
    pairs = sum(len(r) for r in rows) // 2
    out = [f"{len(rows)} {pairs}\n"]
    for row in rows:
        out.append(" ".join(format_int(int(u) + 1) for u in row) + "\n")
    return "".join(out)


def parse_metis_graph(text: str) -> tuple[int, int, list[np.ndarray]]:
    """Read a METIS graph file back into 0-based neighbor lists.

    Supports the plain unweighted flavor (fmt flag absent or 0); ``%``
    comment lines are skipped.  Returns ``(n, m_pairs, adjacency)``.
    """
    lines = [ln for ln in split_lines(text) if not ln.lstrip().startswith("%")]
    if not lines:
        raise FormatError("empty graph file", code="LEN", kind="metis")
    head = lines[0].split()
    if len(head) < 2:
        raise FormatError("header needs vertex and edge counts", code="LEN",
                          kind="metis", line=1)
    n = parse_int(head[0], "vertex count")
    m = parse_int(head[1], "edge count")
    for extra in head[2:]:
        flag = parse_int(extra, "format flag")
        if flag != 0:
            raise FormatError("weighted graph files are not supported",
                              code="KIND", kind="metis", line=1)
    if len(lines) - 1 != n:
        raise FormatError(f"expected {n} vertex lines, found {len(lines) - 1}",
                          code="LEN", kind="metis")
    adjacency = []
    total = 0
    for i, raw in enumerate(lines[1:], start=1):
        toks = raw.split()
        row = np.empty(len(toks), dtype=np.int64)
        for j, tok in enumerate(toks):
            v = parse_int(tok, "neighbor index")
            if not 1 <= v <= n:
                raise FormatError(f"neighbor {v} out of range [1, {n}]",
                                  code="BADREF", kind="metis", line=i + 1)
            row[j] = v - 1
        total += len(toks)
        adjacency.append(row)
    if total != 2 * m:
        raise FormatError(
            f"header declares {m} pairs but lists {total} entries",
            code="LEN", kind="metis")
    return n, m, adjacency


def export_edgelist(net: Network) -> str:
    """Render every directed edge as ``source target model values...``.

    Lines are sorted by (target, source); values use canonical float
    rendering, so equal networks export byte-equal lists.
    """
    out = []
    base = 0
    for block in net.partitions:
        for i in range(block.n_local):
            g = base + i
            nbrs = block.adjacency[i]
            incoming = []
            for j, (name, vals) in enumerate(block.edge_entries(i)):
                if name != NONE_MODEL:
                    incoming.append((int(nbrs[j]), name, vals))
            incoming.sort(key=lambda t: t[0])
            for src, name, vals in incoming:
                toks = [format_int(src), format_int(g), name]
                toks.extend(format_float(v) for v in vals)
                out.append(" ".join(toks) + "\n")
        base += block.n_local
    return "".join(out)
