"""Whole-network consistency checking.

Violations are data, not exceptions: the validator always walks the entire
network and returns everything it finds, which is what you want when
debugging a corpus of generated or hand-edited filesets.

Stable codes:

=========== ====================================================
ASYM        vertex g lists u but u does not list g
BADREF      vertex or event references an index outside [0, n)
TUPLELEN    state tuple length disagrees with the model table
DUPNBR      a neighbor repeats within one adjacency row
SELFLOOP    a vertex lists itself
BOTHNONE    an adjacent pair carries no directed edge at all
EVTOWNER    an event is stored outside its target's partition
EVTIME      an event has a negative arrival time
KIND        a vertex slot names an edge model or vice versa
MODEL       a state entry names an unknown model
NAME        model table name collision or reserved name
TOKEN       a name/key/type is not a clean ASCII token
LEN         per-partition array lengths disagree with the dist
PART        partition count or index mismatch
=========== ====================================================
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EDGE, NONE_MODEL, VERTEX, Network, owner_of
from .textio import is_token


@dataclass(frozen=True)
class Violation:
    code: str
    kind: str  # file kind the problem maps to: dist/model/adjcy/coord/state/event
    partition: int | None
    line: int | None  # 1-based line within that file kind
    message: str

    def where(self, prefix: str | None = None) -> str:
        """Human locus, as <file>:<line> when a prefix is supplied."""
        name = self.kind
        if self.partition is not None and self.kind not in ("dist", "model"):
            name = f"{self.kind}.{self.partition}"
        if prefix is not None:
            name = f"{prefix}.{name}"
        return f"{name}:{self.line}" if self.line is not None else name


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(f"{v.code} {v.where()} {v.message}" for v in self.violations)


def _check_models(net: Network, out: list[Violation]) -> None:
    seen = set()
    for idx, e in enumerate(net.models.entries):
        line = idx + 1
        if not is_token(e.name):
            out.append(Violation("TOKEN", "model", None, line,
                                 f"model name {e.name!r} is not a clean token"))
        if e.name == NONE_MODEL:
            out.append(Violation("NAME", "model", None, line,
                                 f"model name {NONE_MODEL!r} is reserved"))
        if e.name in seen:
            out.append(Violation("NAME", "model", None, line,
                                 f"duplicate model name {e.name!r}"))
        seen.add(e.name)
        if e.kind not in (VERTEX, EDGE):
            out.append(Violation("KIND", "model", None, line,
                                 f"model {e.name!r} has unknown kind {e.kind!r}"))
        if e.state_size < 0:
            out.append(Violation("TUPLELEN", "model", None, line,
                                 f"model {e.name!r} has negative state size"))
        for key, _ in e.params:
            if not is_token(key) or "=" in key:
                out.append(Violation("TOKEN", "model", None, line,
                                     f"model {e.name!r} has bad parameter key {key!r}"))


def _check_block_shapes(net: Network, out: list[Violation]) -> bool:
    dist = net.distribution
    ok = True
    if len(net.partitions) != dist.k:
        out.append(Violation("PART", "dist", None, None,
                             f"expected {dist.k} partitions, got {len(net.partitions)}"))
        return False
    for p, block in enumerate(net.partitions):
        if block.part_index != p:
            out.append(Violation("PART", "adjcy", p, None,
                                 f"block at position {p} has part_index {block.part_index}"))
        n_p = dist.size(p)
        for kind, length in (
            ("adjcy", block.n_local),
            ("coord", len(block.coords)),
            ("state", len(block.vertex_models)),
        ):
            if length != n_p:
                out.append(Violation("LEN", kind, p, None,
                                     f"{length} rows, distribution says {n_p}"))
                ok = False
        if not (len(block.vertex_values) == len(block.vertex_models)
                and len(block.edge_models) == block.n_local
                and len(block.edge_values) == block.n_local
                and len(block.edge_value_lens) == block.n_local):
            out.append(Violation("LEN", "state", p, None, "ragged state columns"))
            ok = False
    return ok


def _check_vertex_state(net: Network, out: list[Violation]) -> None:
    for p, block in enumerate(net.partitions):
        for i in range(len(block.vertex_models)):
            name = block.vertex_models[i]
            vals = block.vertex_values[i]
            line = i + 1
            entry = net.models.get(name)
            if entry is None:
                out.append(Violation("MODEL", "state", p, line,
                                     f"unknown vertex model {name!r}"))
                continue
            if entry.kind != VERTEX:
                out.append(Violation("KIND", "state", p, line,
                                     f"model {name!r} is not a vertex model"))
            elif len(vals) != entry.state_size:
                out.append(Violation("TUPLELEN", "state", p, line,
                                     f"vertex tuple has {len(vals)} values, "
                                     f"model {name!r} declares {entry.state_size}"))


def _check_edges(net: Network, out: list[Violation]) -> None:
    n = net.n
    dist = net.distribution
    # Harvested (target, neighbor, has-incoming-state) triples for the global
    # symmetry and direction-completeness checks, kept as flat arrays so large
    # networks stay cheap to scan.
    g_chunks: list[np.ndarray] = []
    u_chunks: list[np.ndarray] = []
    inc_chunks: list[np.ndarray] = []
    for p, block in enumerate(net.partitions):
        base = dist.dist[p]
        masks = block.incoming_masks
        for i in range(block.n_local):
            g = base + i
            line = i + 1
            nbrs = block.adjacency[i]
            names = block.edge_models[i]
            lens = block.edge_value_lens[i]
            if len(names) != len(nbrs) or len(lens) != len(nbrs):
                out.append(Violation("LEN", "state", p, line,
                                     f"{len(names)} edge entries for {len(nbrs)} neighbors"))
                continue
            seen = set()
            for j, u in enumerate(nbrs):
                u = int(u)
                name = names[j]
                ln = int(lens[j])
                if u == g:
                    out.append(Violation("SELFLOOP", "adjcy", p, line,
                                         f"vertex {g} lists itself"))
                elif not 0 <= u < n:
                    out.append(Violation("BADREF", "adjcy", p, line,
                                         f"vertex {g} lists neighbor {u}, valid range [0, {n})"))
                if u in seen:
                    out.append(Violation("DUPNBR", "adjcy", p, line,
                                         f"vertex {g} lists neighbor {u} twice"))
                seen.add(u)
                if name != NONE_MODEL:
                    entry = net.models.get(name)
                    if entry is None:
                        out.append(Violation("MODEL", "state", p, line,
                                             f"unknown edge model {name!r}"))
                    else:
                        if entry.kind != EDGE:
                            out.append(Violation("KIND", "state", p, line,
                                                 f"model {name!r} is not an edge model"))
                        elif ln != entry.state_size:
                            out.append(Violation(
                                "TUPLELEN", "state", p, line,
                                f"edge tuple for neighbor {u} has {ln} values, "
                                f"model {name!r} declares {entry.state_size}"))
                elif ln != 0:
                    out.append(Violation("TUPLELEN", "state", p, line,
                                         f"'none' entry for neighbor {u} carries {ln} values"))
            g_chunks.append(np.full(len(nbrs), g, dtype=np.int64))
            u_chunks.append(nbrs.astype(np.int64, copy=False))
            inc_chunks.append(masks[i])
    if not g_chunks:
        return
    targets = np.concatenate(g_chunks)
    nbrs_all = np.concatenate(u_chunks)
    inc_all = np.concatenate(inc_chunks)
    sane = (nbrs_all >= 0) & (nbrs_all < n) & (nbrs_all != targets)
    targets, nbrs_all, inc_all = targets[sane], nbrs_all[sane], inc_all[sane]
    if len(targets) == 0:
        return
    # Each entry (g, u) must have a mirror entry (u, g); pairs are matched by
    # the scalar key g*n + u.
    key = targets * n + nbrs_all
    rkey = nbrs_all * n + targets
    order = np.argsort(key, kind="stable")
    skey = key[order]
    sinc = inc_all[order]
    pos = np.searchsorted(skey, rkey)
    pos_c = np.minimum(pos, len(skey) - 1)
    found = skey[pos_c] == rkey

    def _locate(g: int) -> tuple[int, int]:
        p = owner_of(dist, g)
        return p, g - dist.dist[p] + 1

    for idx in np.nonzero(~found)[0]:
        g, u = int(targets[idx]), int(nbrs_all[idx])
        p, line = _locate(g)
        out.append(Violation("ASYM", "adjcy", p, line,
                             f"vertex {g} lists {u} but {u} does not list {g}"))
    rev_inc = np.zeros(len(targets), dtype=bool)
    rev_inc[found] = sinc[pos_c[found]]
    bothnone = found & ~inc_all & ~rev_inc & (targets < nbrs_all)
    for idx in np.nonzero(bothnone)[0]:
        g, u = int(targets[idx]), int(nbrs_all[idx])
        p, line = _locate(g)
        out.append(Violation("BOTHNONE", "state", p, line,
                             f"pair ({g}, {u}) has 'none' on both sides"))


def _check_events(net: Network, out: list[Violation]) -> None:
    n = net.n
    dist = net.distribution
    for p, block in enumerate(net.partitions):
        for idx, ev in enumerate(block.events):
            line = idx + 1
            if not 0 <= ev.target < n:
                out.append(Violation("BADREF", "event", p, line,
                                     f"event target {ev.target} out of range [0, {n})"))
            elif owner_of(dist, ev.target) != p:
                out.append(Violation(
                    "EVTOWNER", "event", p, line,
                    f"event target {ev.target} belongs to partition "
                    f"{owner_of(dist, ev.target)}, stored in {p}"))
            if not 0 <= ev.source < n:
                out.append(Violation("BADREF", "event", p, line,
                                     f"event source {ev.source} out of range [0, {n})"))
            if ev.time < 0:
                out.append(Violation("EVTIME", "event", p, line,
                                     f"negative arrival time {ev.time}"))
            if not is_token(ev.type):
                out.append(Violation("TOKEN", "event", p, line,
                                     f"event type {ev.type!r} is not a clean token"))


def validate(net: Network) -> ValidationReport:
    """Collect every invariant violation in ``net`` (empty report = valid)."""
    out: list[Violation] = []
    _check_models(net, out)
    if _check_block_shapes(net, out):
        _check_vertex_state(net, out)
        _check_edges(net, out)
        _check_events(net, out)
    return ValidationReport(tuple(out))
