"""In-memory representation of a partitioned spiking network.

The layout mirrors the on-disk format: a vertex-offset prefix array over k
partitions, a model dictionary, and one block per partition holding the
undirected adjacency rows plus the state colocated with each row.  The entry
stored at vertex ``g`` for neighbor ``u`` describes the directed edge
``u -> g`` (state lives with the edge's target); the reserved model name
``"none"`` marks a neighbor connected by an outgoing edge only.

All containers are frozen after construction and safe to share between
threads.  Construction performs only cheap shape normalization; deep
consistency checking is the job of :func:`dcsrnet.validate.validate`, which
reports violations as data instead of raising, so deliberately corrupt
networks can be built for testing.
"""

from __future__ import annotations

import sys
from bisect import bisect_right
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

NONE_MODEL = "none"

VERTEX = "vertex"
EDGE = "edge"


@dataclass(frozen=True)
class Distribution:
    """k+1 global vertex offsets; partition p owns [dist[p], dist[p+1])."""

    dist: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.dist)
        object.__setattr__(self, "dist", d)
        if len(d) < 2:
            raise ValueError("distribution needs at least two offsets")
        if d[0] != 0:
            raise ValueError("distribution must start at 0")
        if any(b < a for a, b in zip(d, d[1:])):
            raise ValueError("distribution offsets must be non-decreasing")

    @property
    def k(self) -> int:
        return len(self.dist) - 1

    @property
    def n(self) -> int:
        return self.dist[-1]

    def size(self, p: int) -> int:
        return self.dist[p + 1] - self.dist[p]

    @classmethod
    def from_sizes(cls, sizes) -> "Distribution":
        offsets = [0]
        for s in sizes:
            offsets.append(offsets[-1] + int(s))
        return cls(tuple(offsets))


def owner_of(dist: Distribution, g: int) -> int:
    """Partition index owning global vertex ``g``."""
    if not 0 <= g < dist.n:
        raise IndexError(f"vertex {g} out of range [0, {dist.n})")
    return bisect_right(dist.dist, g) - 1


@dataclass(frozen=True)
class ModelDef:
    name: str
    kind: str  # "vertex" | "edge"
    state_size: int
    params: tuple[tuple[str, float], ...] = ()

    def param(self, key: str, default: float | None = None) -> float | None:
        for k, v in self.params:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class ModelTable:
    """Ordered model dictionary: name -> kind, tuple size, shared params."""

    entries: tuple[ModelDef, ...] = ()

    def get(self, name: str) -> ModelDef | None:
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def with_param(self, name: str, key: str, value: float) -> "ModelTable":
        """Copy of the table with ``key=value`` set on entry ``name``
        (replacing an existing key in place, else appended)."""
        out = []
        for e in self.entries:
            if e.name == name:
                params = list(e.params)
                for i, (k, _) in enumerate(params):
                    if k == key:
                        params[i] = (key, float(value))
                        break
                else:
                    params.append((key, float(value)))
                e = replace(e, params=tuple(params))
            out.append(e)
        return ModelTable(tuple(out))

    def without_param(self, name: str, key: str) -> "ModelTable":
        out = []
        for e in self.entries:
            if e.name == name:
                e = replace(e, params=tuple(p for p in e.params if p[0] != key))
            out.append(e)
        return ModelTable(tuple(out))


@dataclass(frozen=True)
class Event:
    """An in-flight message: emitted but not yet applied at its target."""

    target: int
    source: int
    time: float  # arrival time, milliseconds
    type: str = "spike"
    data: tuple[float, ...] = ()

    def sort_key(self):
        return (self.time, self.target, self.source, self.type, self.data)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PartitionBlock:
    """One partition's rows: adjacency, coordinates, state tuples, events.

    Bulk state is columnar: per local vertex, ``adjacency[i]`` is an int64
    array of global neighbor ids, ``edge_models[i]`` the per-neighbor model
    names, ``edge_values[i]`` the per-neighbor tuples concatenated into one
    flat float64 array, and ``edge_value_lens[i]`` the actual tuple lengths
    (kept separately so that malformed tuples remain representable).
    """

    part_index: int
    adjacency: tuple[np.ndarray, ...]
    coords: np.ndarray
    vertex_models: tuple[str, ...]
    vertex_values: tuple[tuple[float, ...], ...]
    edge_models: tuple[tuple[str, ...], ...]
    edge_values: tuple[np.ndarray, ...]
    edge_value_lens: tuple[np.ndarray, ...]
    events: tuple[Event, ...] = ()

    def __post_init__(self):
        for a in self.adjacency:
            _freeze(a)
        for a in self.edge_values:
            _freeze(a)
        for a in self.edge_value_lens:
            _freeze(a)
        _freeze(self.coords)

    @property
    def n_local(self) -> int:
        return len(self.adjacency)

    @cached_property
    def incoming_masks(self) -> tuple[np.ndarray, ...]:
        """Per local vertex, bool array marking neighbors that carry edge state."""
        out = []
        for names in self.edge_models:
            mask = np.fromiter((nm != NONE_MODEL for nm in names), bool, len(names))
            out.append(_freeze(mask))
        return tuple(out)

    def neighbors(self, i: int) -> np.ndarray:
        return self.adjacency[i]

    def edge_entries(self, i: int) -> list[tuple[str, tuple[float, ...]]]:
        """Per-neighbor (model, value tuple) pairs for local vertex ``i``."""
        out = []
        flat = self.edge_values[i]
        pos = 0
        for name, ln in zip(self.edge_models[i], self.edge_value_lens[i]):
            ln = int(ln)
            out.append((name, tuple(float(v) for v in flat[pos : pos + ln])))
            pos += ln
        return out

    def vertex_entry(self, i: int) -> tuple[str, tuple[float, ...]]:
        return self.vertex_models[i], self.vertex_values[i]

    @classmethod
    def from_lists(cls, part_index, adjacency, coords, vertex_state, edge_state,
                   events=()) -> "PartitionBlock":
        """Build a block from plain per-vertex Python structures.

        ``vertex_state``: per vertex ``(model, values)``; ``edge_state``: per
        vertex a list of per-neighbor ``(model, values)``.
        """
        adj = tuple(np.asarray(a, dtype=np.int64).reshape(len(a)) for a in adjacency)
        xyz = np.asarray(coords, dtype=np.float64).reshape(len(adj), 3).copy()
        vmodels = tuple(sys.intern(str(m)) for m, _ in vertex_state)
        vvalues = tuple(tuple(float(v) for v in vals) for _, vals in vertex_state)
        emodels = []
        evalues = []
        elens = []
        for entries in edge_state:
            emodels.append(tuple(sys.intern(str(m)) for m, _ in entries))
            elens.append(np.asarray([len(vals) for _, vals in entries], dtype=np.int32))
            flat = [float(v) for _, vals in entries for v in vals]
            evalues.append(np.asarray(flat, dtype=np.float64))
        return cls(
            part_index=int(part_index),
            adjacency=adj,
            coords=xyz,
            vertex_models=vmodels,
            vertex_values=vvalues,
            edge_models=tuple(emodels),
            edge_values=tuple(evalues),
            edge_value_lens=tuple(elens),
            events=tuple(events),
        )


@dataclass(frozen=True, eq=False)
class Network:
    """Distribution + model table + one block per partition."""

    distribution: Distribution
    models: ModelTable
    partitions: tuple[PartitionBlock, ...]

    @property
    def n(self) -> int:
        return self.distribution.n

    @property
    def k(self) -> int:
        return self.distribution.k

    @property
    def m(self) -> int:
        """Total directed edge count (non-"none" entries over all blocks)."""
        return int(sum(int(mask.sum()) for block in self.partitions
                       for mask in block.incoming_masks))

    def block_of(self, g: int) -> tuple[PartitionBlock, int]:
        """(owning block, local index) for global vertex ``g``."""
        p = owner_of(self.distribution, g)
        return self.partitions[p], g - self.distribution.dist[p]

    def events(self) -> list[Event]:
        out = []
        for block in self.partitions:
            out.extend(block.events)
        return out


def in_degree(net: Network, g: int) -> int:
    """Number of directed edges terminating at ``g``."""
    block, i = net.block_of(g)
    return int(block.incoming_masks[i].sum())


def in_csr(net: Network) -> tuple[np.ndarray, np.ndarray]:
    """Classic CSR over incoming edges, rows in global vertex order.

    Returns ``(row_ptr, col)`` with ``row_ptr`` of size n+1, ``col`` of size m
    holding source indices in ascending order within each row.
    """
    n = net.n
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    cols = []
    g = 0
    for block in net.partitions:
        masks = block.incoming_masks
        for i in range(block.n_local):
            sources = np.sort(block.adjacency[i][masks[i]])
            cols.append(sources)
            row_ptr[g + 1] = row_ptr[g] + len(sources)
            g += 1
    col = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    return row_ptr, col.astype(np.int64, copy=False)


def undirected_pair_count(net: Network) -> int:
    """Number of adjacent vertex pairs (half the adjacency entries)."""
    total = sum(len(block.adjacency[i]) for block in net.partitions
                for i in range(block.n_local))
    return total // 2
