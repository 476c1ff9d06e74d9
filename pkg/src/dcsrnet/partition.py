"""Partition assignments, network redistribution, and partition metrics.

An :class:`Assignment` maps every global vertex to a destination part.
Assignments come from a geometric voxel heuristic over the vertex
coordinates or from an external partitioner's part-vector file (one integer
per line).  :func:`redistribute` rebuilds a network around an assignment:
vertices are renumbered by the permutation that stably sorts (part, old id),
so every part owns a contiguous id range, which is what the offset-array
layout requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Distribution, Event, Network, PartitionBlock, owner_of
from .textio import FormatError, parse_int, split_lines


@dataclass(frozen=True)
class Assignment:
    """Destination part (in [0, k)) of every global vertex."""

    parts: np.ndarray
    k: int

    def __post_init__(self):
        parts = np.asarray(self.parts, dtype=np.int64)
        parts.setflags(write=False)
        object.__setattr__(self, "parts", parts)
        if self.k < 1:
            raise ValueError("need at least one part")
        if parts.ndim != 1:
            raise ValueError("parts must be one-dimensional")
        if len(parts) and (parts.min() < 0 or parts.max() >= self.k):
            raise ValueError(f"part values must lie in [0, {self.k})")

    @property
    def n(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class PartitionMetrics:
    """Quality summary of an assignment over a concrete network."""

    edge_cut: int
    balance: float
    part_vertices: tuple[int, ...]
    part_edges: tuple[int, ...]


def voxel_partition(coords: np.ndarray, grid: tuple[int, int, int],
                    k: int) -> Assignment:
    """Geometric assignment: bin vertices into a uniform spatial grid over
    their bounding box, then pack cells into parts.

    Cells are visited in lexicographic (ix, iy, iz) order and assigned
    greedily: part j keeps receiving whole cells until the cumulative vertex
    count reaches ceil(n*(j+1)/k).  Cells are half-open with the last cell
    closed, so a vertex exactly on an interior boundary lands in the
    higher-index cell.  A zero-extent axis collapses to a single cell.
    """
    coords = np.asarray(coords, dtype=np.float64).reshape(-1, 3)
    n = len(coords)
    if k < 1:
        raise ValueError("need at least one part")
    if k > n:
        raise ValueError(f"cannot split {n} vertices into {k} parts")
    dims = tuple(int(g) for g in grid)
    if len(dims) != 3 or any(g < 1 for g in dims):
        raise ValueError(f"grid dimensions must be >= 1, got {grid}")
    cell_axis = np.zeros((n, 3), dtype=np.int64)
    for ax in range(3):
        lo = coords[:, ax].min()
        hi = coords[:, ax].max()
        if hi == lo or dims[ax] == 1:
            continue
        scaled = (coords[:, ax] - lo) / (hi - lo) * dims[ax]
        cell_axis[:, ax] = np.clip(np.floor(scaled).astype(np.int64),
                                   0, dims[ax] - 1)
    cell = (cell_axis[:, 0] * dims[1] + cell_axis[:, 1]) * dims[2] + cell_axis[:, 2]
    ncells = dims[0] * dims[1] * dims[2]
    counts = np.bincount(cell, minlength=ncells)
    cell_part = np.zeros(ncells, dtype=np.int64)
    j = 0
    cum = 0
    for c in range(ncells):
        cell_part[c] = j
        cum += int(counts[c])
        while j < k - 1 and cum >= math.ceil(n * (j + 1) / k):
            j += 1
    return Assignment(cell_part[cell], k)


def assignment_from_file(text: str, n: int, k: int) -> Assignment:
    """Read a part-vector file: n lines, one destination part per line."""
    lines = split_lines(text)
    if len(lines) != n:
        raise FormatError(f"expected {n} part lines, found {len(lines)}",
                          code="LEN", kind="parts")
    parts = np.empty(n, dtype=np.int64)
    for i, raw in enumerate(lines):
        toks = raw.split()
        if len(toks) != 1:
            raise FormatError(f"expected one part index, got {len(toks)} tokens",
                              code="LEN", kind="parts", line=i + 1)
        try:
            v = parse_int(toks[0], "part index")
        except FormatError as exc:
            raise FormatError(exc.message, code="INT", kind="parts",
                              line=i + 1) from None
        if not 0 <= v < k:
            raise FormatError(f"part {v} out of range [0, {k})", code="PART",
                              kind="parts", line=i + 1)
        parts[i] = v
    return Assignment(parts, k)


def renumbering(a: Assignment) -> tuple[np.ndarray, np.ndarray, Distribution]:
    """Permutation induced by an assignment.

    Returns ``(old_of_new, new_of_old, dist)`` where new vertex ids are the
    ranks of (part, old id) under stable ascending sort, and ``dist`` holds
    the resulting contiguous part offsets.
    """
    old_of_new = np.argsort(a.parts, kind="stable")
    new_of_old = np.empty_like(old_of_new)
    new_of_old[old_of_new] = np.arange(a.n, dtype=np.int64)
    counts = np.bincount(a.parts, minlength=a.k)
    offsets = np.zeros(a.k + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return old_of_new, new_of_old, Distribution(tuple(int(x) for x in offsets))


def redistribute(net: Network, a: Assignment) -> Network:
    """Rebuild ``net`` with vertices regrouped into ``a.k`` contiguous parts.

    Adjacency, state, coordinates and pending events are remapped through the
    renumbering permutation; each event moves to the partition owning its new
    target.  The input must be valid and the assignment must cover all n
    vertices.
    """
    if a.n != net.n:
        raise ValueError(f"assignment covers {a.n} vertices, network has {net.n}")
    old_of_new, new_of_old, dist = renumbering(a)
    event_buckets: list[list[Event]] = [[] for _ in range(a.k)]
    for block in net.partitions:
        for ev in block.events:
            target = int(new_of_old[ev.target])
            source = int(new_of_old[ev.source])
            moved = Event(target=target, source=source, time=ev.time,
                          type=ev.type, data=ev.data)
            event_buckets[owner_of(dist, target)].append(moved)
    blocks = []
    for p in range(a.k):
        lo, hi = dist.dist[p], dist.dist[p + 1]
        adjacency = []
        coords = np.empty((hi - lo, 3), dtype=np.float64)
        vertex_state = []
        edge_state = []
        for new_g in range(lo, hi):
            old_g = int(old_of_new[new_g])
            src_block, i = net.block_of(old_g)
            adjacency.append(new_of_old[src_block.adjacency[i]])
            coords[new_g - lo] = src_block.coords[i]
            vertex_state.append(src_block.vertex_entry(i))
            edge_state.append(src_block.edge_entries(i))
        blocks.append(PartitionBlock.from_lists(
            p, adjacency, coords, vertex_state, edge_state,
            sorted(event_buckets[p], key=lambda e: e.sort_key())))
    return Network(dist, net.models, tuple(blocks))


def current_assignment(net: Network) -> Assignment:
    """The assignment implied by the network's own ownership ranges."""
    sizes = [net.distribution.size(p) for p in range(net.k)]
    return Assignment(np.repeat(np.arange(net.k, dtype=np.int64), sizes), net.k)


def metrics(net: Network, a: Assignment | None = None) -> PartitionMetrics:
    """Edge cut, balance and per-part counts of ``a`` over ``net``.

    Without an explicit assignment, measures the network's current layout.
    Edge cut counts directed edges whose source and target parts differ;
    balance is max part vertex count over ceil(n/k); a part's edge count is
    the number of directed edges terminating in it.
    """
    if a is None:
        a = current_assignment(net)
    if a.n != net.n:
        raise ValueError(f"assignment covers {a.n} vertices, network has {net.n}")
    parts = a.parts
    edge_cut = 0
    part_edges = np.zeros(a.k, dtype=np.int64)
    base = 0
    for block in net.partitions:
        masks = block.incoming_masks
        for i in range(block.n_local):
            g = base + i
            sources = block.adjacency[i][masks[i]]
            part_edges[parts[g]] += len(sources)
            if len(sources):
                edge_cut += int(np.count_nonzero(parts[sources] != parts[g]))
        base += block.n_local
    part_vertices = np.bincount(parts, minlength=a.k) if a.n else np.zeros(a.k, np.int64)
    if a.n:
        balance = float(part_vertices.max()) / math.ceil(a.n / a.k)
    else:
        balance = 1.0
    return PartitionMetrics(
        edge_cut=int(edge_cut),
        balance=float(balance),
        part_vertices=tuple(int(x) for x in part_vertices),
        part_edges=tuple(int(x) for x in part_edges),
    )
