"""Per-kind parsers and canonical serializers for the fileset text formats.

Six file kinds make up a saved network (``<prefix>.<kind>[.<p>]``):

========  ===========================================================
dist      one line, k+1 vertex offsets (``0 4 7 10``)
model     one line per model: ``name kind size [key=value]...``
adjcy.p   one line per local vertex: global neighbor ids
coord.p   one line per local vertex: ``x y z``
state.p   one line per local vertex: vertex entry then one edge entry
          per neighbor, in adjacency order; ``none`` marks a neighbor
          with no incoming edge and carries no values
event.p   one line per pending event: ``target source time type [data]...``
========  ===========================================================

Parsers accept any token spacing and neighbor order and raise
:class:`~dcsrnet.textio.FormatError` (with a stable ``code`` naming the
violated rule) on malformed input.  Serializers emit canonical text: single
spaces, LF endings, ascending neighbor order with state entries permuted to
match, events sorted by (time, target, source, type, data), shortest
round-tripping float rendering.  ``serialize(parse(serialize(x)))`` is
byte-identical to ``serialize(x)``.
"""

from __future__ import annotations

import numpy as np

from .model import (
    EDGE,
    NONE_MODEL,
    VERTEX,
    Distribution,
    Event,
    ModelDef,
    ModelTable,
    PartitionBlock,
)
from .textio import (
    FormatError,
    format_float,
    format_int,
    is_token,
    parse_float,
    parse_int,
    split_lines,
)

EdgeEntry = tuple[str, tuple[float, ...]]


def _int(token: str, what: str, *, kind: str, p=None, line=None) -> int:
    try:
        return parse_int(token, what)
    except FormatError as exc:
        raise FormatError(exc.message, code="INT", kind=kind, partition=p,
                          line=line) from None


def _float(token: str, what: str, *, kind: str, p=None, line=None) -> float:
    try:
        return parse_float(token, what)
    except FormatError as exc:
        raise FormatError(exc.message, code="FLOAT", kind=kind, partition=p,
                          line=line) from None


# ---------------------------------------------------------------- dist

def parse_dist(text: str) -> Distribution:
    """Parse the k+1 vertex offsets; exactly one non-blank line."""
    lines = [ln for ln in split_lines(text) if ln.strip()]
    if len(lines) != 1:
        raise FormatError(f"expected one line of offsets, found {len(lines)}",
                          code="LEN", kind="dist")
    toks = lines[0].split()
    if len(toks) < 2:
        raise FormatError("need at least two offsets", code="LEN",
                          kind="dist", line=1)
    vals = [_int(t, "offset", kind="dist", line=1) for t in toks]
    if vals[0] != 0:
        raise FormatError(f"offsets must start at 0, got {vals[0]}",
                          code="DIST", kind="dist", line=1)
    for a, b in zip(vals, vals[1:]):
        if b < a:
            raise FormatError(f"offsets decrease: {a} then {b}", code="DIST",
                              kind="dist", line=1)
    return Distribution(tuple(vals))


def serialize_dist(dist: Distribution) -> str:
    return " ".join(format_int(x) for x in dist.dist) + "\n"


# ---------------------------------------------------------------- model

def parse_model(text: str) -> ModelTable:
    """Parse model declarations, one per non-blank line, order preserved."""
    entries: list[ModelDef] = []
    names: set[str] = set()
    for lineno, raw in enumerate(split_lines(text), start=1):
        toks = raw.split()
        if not toks:
            continue
        if len(toks) < 3:
            raise FormatError("model line needs: name kind state_size",
                              code="LEN", kind="model", line=lineno)
        name, mkind, size_tok = toks[0], toks[1], toks[2]
        if not is_token(name):
            raise FormatError(f"bad model name {name!r}", code="TOKEN",
                              kind="model", line=lineno)
        if name == NONE_MODEL:
            raise FormatError(f"model name {NONE_MODEL!r} is reserved",
                              code="NAME", kind="model", line=lineno)
        if name in names:
            raise FormatError(f"duplicate model name {name!r}", code="NAME",
                              kind="model", line=lineno)
        if mkind not in (VERTEX, EDGE):
            raise FormatError(
                f"model kind must be '{VERTEX}' or '{EDGE}', got {mkind!r}",
                code="KIND", kind="model", line=lineno)
        size = _int(size_tok, "state size", kind="model", line=lineno)
        if size < 0:
            raise FormatError(f"negative state size {size}", code="TUPLELEN",
                              kind="model", line=lineno)
        params = []
        for tok in toks[3:]:
            key, eq, val = tok.partition("=")
            if not eq or not key or not val or not is_token(key):
                raise FormatError(f"malformed parameter {tok!r}, "
                                  "expected key=value", code="PARAM",
                                  kind="model", line=lineno)
            params.append((key, _float(val, f"value of {key!r}",
                                       kind="model", line=lineno)))
        names.add(name)
        entries.append(ModelDef(name, mkind, size, tuple(params)))
    return ModelTable(tuple(entries))


def serialize_model(models: ModelTable) -> str:
    out = []
    for e in models.entries:
        toks = [e.name, e.kind, format_int(e.state_size)]
        toks.extend(f"{k}={format_float(v)}" for k, v in e.params)
        out.append(" ".join(toks) + "\n")
    return "".join(out)


# ---------------------------------------------------------------- adjcy

def parse_adjacency(text: str, dist: Distribution, p: int) -> list[np.ndarray]:
    """Parse one partition's neighbor lists; line i belongs to global vertex
    dist[p]+i, and an empty line is an isolated vertex."""
    lines = split_lines(text)
    lo, hi = dist.dist[p], dist.dist[p + 1]
    if len(lines) != hi - lo:
        raise FormatError(
            f"expected {hi - lo} adjacency lines, found {len(lines)}",
            code="LEN", kind="adjcy", partition=p)
    n = dist.n
    rows = []
    for i, raw in enumerate(lines):
        lineno = i + 1
        g = lo + i
        toks = raw.split()
        seen: set[int] = set()
        vals = np.empty(len(toks), dtype=np.int64)
        for j, tok in enumerate(toks):
            u = _int(tok, "neighbor index", kind="adjcy", p=p, line=lineno)
            if u == g:
                raise FormatError(f"vertex {g} lists itself", code="SELFLOOP",
                                  kind="adjcy", partition=p, line=lineno)
            if not 0 <= u < n:
                raise FormatError(f"neighbor {u} out of range [0, {n})",
                                  code="BADREF", kind="adjcy", partition=p,
                                  line=lineno)
            if u in seen:
                raise FormatError(f"duplicate neighbor {u}", code="DUPNBR",
                                  kind="adjcy", partition=p, line=lineno)
            seen.add(u)
            vals[j] = u
        rows.append(vals)
    return rows


def neighbor_orders(block: PartitionBlock) -> list[np.ndarray]:
    """Per local vertex, the permutation putting neighbors in ascending
    global order; shared by the adjacency and state serializers so the two
    files stay aligned."""
    return [np.argsort(row, kind="stable") for row in block.adjacency]


def serialize_adjacency(block: PartitionBlock, orders=None) -> str:
    orders = neighbor_orders(block) if orders is None else orders
    out = []
    for row, order in zip(block.adjacency, orders):
        out.append(" ".join(format_int(int(u)) for u in row[order]) + "\n")
    return "".join(out)


# ---------------------------------------------------------------- coord

def parse_coord(text: str, expected_count: int, *, partition=None) -> np.ndarray:
    lines = split_lines(text)
    if len(lines) != expected_count:
        raise FormatError(
            f"expected {expected_count} coordinate lines, found {len(lines)}",
            code="LEN", kind="coord", partition=partition)
    coords = np.empty((expected_count, 3), dtype=np.float64)
    for i, raw in enumerate(lines):
        toks = raw.split()
        if len(toks) != 3:
            raise FormatError(f"expected 3 coordinates, got {len(toks)}",
                              code="ARITY", kind="coord", partition=partition,
                              line=i + 1)
        for j in range(3):
            coords[i, j] = _float(toks[j], "coordinate", kind="coord",
                                  p=partition, line=i + 1)
    return coords


def serialize_coord(block: PartitionBlock) -> str:
    out = []
    for row in block.coords:
        out.append(" ".join(format_float(float(v)) for v in row) + "\n")
    return "".join(out)


# ---------------------------------------------------------------- state

def parse_state(text: str, adjacency: list[np.ndarray], models: ModelTable,
                *, partition=None):
    """Parse one partition's state lines against its adjacency.

    Line i carries the vertex entry of local vertex i followed by one edge
    entry per neighbor, in the adjacency line's order.  Each entry is a model
    name plus exactly ``state_size`` values; ``none`` consumes zero values.
    Returns ``(vertex_state, edge_state)`` lists aligned with the adjacency.
    """
    lines = split_lines(text)
    if len(lines) != len(adjacency):
        raise FormatError(
            f"expected {len(adjacency)} state lines, found {len(lines)}",
            code="LEN", kind="state", partition=partition)
    vertex_state: list[EdgeEntry] = []
    edge_state: list[list[EdgeEntry]] = []
    for i, raw in enumerate(lines):
        lineno = i + 1
        toks = raw.split()
        ntok = len(toks)
        pos = 0
        if pos >= ntok:
            raise FormatError("missing vertex entry", code="TUPLELEN",
                              kind="state", partition=partition, line=lineno)
        vname = toks[pos]
        pos += 1
        ventry = models.get(vname) if vname != NONE_MODEL else None
        if ventry is None:
            raise FormatError(f"unknown vertex model {vname!r}", code="MODEL",
                              kind="state", partition=partition, line=lineno)
        if ventry.kind != VERTEX:
            raise FormatError(
                f"model {vname!r} is an edge model, vertex model expected",
                code="KIND", kind="state", partition=partition, line=lineno)
        need = ventry.state_size
        if pos + need > ntok:
            raise FormatError(
                f"vertex tuple needs {need} values, {ntok - pos} left",
                code="TUPLELEN", kind="state", partition=partition,
                line=lineno)
        vvals = tuple(_float(toks[pos + j], "state value", kind="state",
                             p=partition, line=lineno) for j in range(need))
        pos += need
        entries: list[EdgeEntry] = []
        for u in adjacency[i]:
            if pos >= ntok:
                raise FormatError(
                    f"missing edge entry for neighbor {int(u)}",
                    code="TUPLELEN", kind="state", partition=partition,
                    line=lineno)
            ename = toks[pos]
            pos += 1
            if ename == NONE_MODEL:
                entries.append((NONE_MODEL, ()))
                continue
            eentry = models.get(ename)
            if eentry is None:
                raise FormatError(f"unknown edge model {ename!r}",
                                  code="MODEL", kind="state",
                                  partition=partition, line=lineno)
            if eentry.kind != EDGE:
                raise FormatError(
                    f"model {ename!r} is a vertex model, edge model expected",
                    code="KIND", kind="state", partition=partition,
                    line=lineno)
            need = eentry.state_size
            if pos + need > ntok:
                raise FormatError(
                    f"edge tuple for neighbor {int(u)} needs {need} values, "
                    f"{ntok - pos} left", code="TUPLELEN", kind="state",
                    partition=partition, line=lineno)
            evals = tuple(_float(toks[pos + j], "state value", kind="state",
                                 p=partition, line=lineno)
                          for j in range(need))
            pos += need
            entries.append((ename, evals))
        if pos != ntok:
            raise FormatError(f"{ntok - pos} unconsumed tokens",
                              code="LEFTOVER", kind="state",
                              partition=partition, line=lineno)
        vertex_state.append((vname, vvals))
        edge_state.append(entries)
    return vertex_state, edge_state


def serialize_state(block: PartitionBlock, orders=None) -> str:
    orders = neighbor_orders(block) if orders is None else orders
    out = []
    for i in range(block.n_local):
        toks = [block.vertex_models[i]]
        toks.extend(format_float(v) for v in block.vertex_values[i])
        names = block.edge_models[i]
        flat = block.edge_values[i]
        lens = block.edge_value_lens[i]
        offs = np.zeros(len(lens) + 1, dtype=np.int64)
        offs[1:] = np.cumsum(lens, dtype=np.int64)
        for j in orders[i]:
            j = int(j)
            toks.append(names[j])
            toks.extend(format_float(float(v)) for v in flat[offs[j]:offs[j + 1]])
        out.append(" ".join(toks) + "\n")
    return "".join(out)


# ---------------------------------------------------------------- event

def parse_event(text: str, dist: Distribution, p: int) -> list[Event]:
    """Parse pending events; every target must be owned by partition p."""
    events: list[Event] = []
    n = dist.n
    lo, hi = dist.dist[p], dist.dist[p + 1]
    for lineno, raw in enumerate(split_lines(text), start=1):
        toks = raw.split()
        if not toks:
            continue
        if len(toks) < 4:
            raise FormatError("event line needs: target source time type",
                              code="LEN", kind="event", partition=p,
                              line=lineno)
        target = _int(toks[0], "event target", kind="event", p=p, line=lineno)
        source = _int(toks[1], "event source", kind="event", p=p, line=lineno)
        time = _float(toks[2], "arrival time", kind="event", p=p, line=lineno)
        etype = toks[3]
        if not 0 <= target < n:
            raise FormatError(f"event target {target} out of range [0, {n})",
                              code="BADREF", kind="event", partition=p,
                              line=lineno)
        if not lo <= target < hi:
            raise FormatError(
                f"event target {target} is not owned by partition {p}",
                code="EVTOWNER", kind="event", partition=p, line=lineno)
        if not 0 <= source < n:
            raise FormatError(f"event source {source} out of range [0, {n})",
                              code="BADREF", kind="event", partition=p,
                              line=lineno)
        if not time >= 0:
            raise FormatError(f"arrival time {toks[2]} must be >= 0",
                              code="EVTIME", kind="event", partition=p,
                              line=lineno)
        if not is_token(etype):
            raise FormatError(f"bad event type {etype!r}", code="TOKEN",
                              kind="event", partition=p, line=lineno)
        data = tuple(_float(t, "event data", kind="event", p=p, line=lineno)
                     for t in toks[4:])
        events.append(Event(target=target, source=source, time=time,
                            type=etype, data=data))
    return events


def serialize_event(events) -> str:
    out = []
    for ev in sorted(events, key=lambda e: e.sort_key()):
        toks = [format_int(ev.target), format_int(ev.source),
                format_float(ev.time), ev.type]
        toks.extend(format_float(v) for v in ev.data)
        out.append(" ".join(toks) + "\n")
    return "".join(out)
