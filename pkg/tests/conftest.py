"""Shared builders for hand-constructed networks and filesets."""

from __future__ import annotations

from collections import defaultdict

import numpy as np
import pytest

from dcsrnet import (
    Distribution,
    Event,
    ModelDef,
    ModelTable,
    Network,
    PartitionBlock,
)

DEFAULT_MODELS = ModelTable((
    ModelDef("lif", "vertex", 2, (("tau", 10.0), ("v_rest", 0.0),
                                  ("v_th", 1.0), ("v_reset", 0.0),
                                  ("refrac_steps", 0.0))),
    ModelDef("syn", "edge", 2, ()),
))


def build_net(n, k, edges, *, coords=None, v_init=None, models=None,
              events=()) -> Network:
    """Construct a network from a plain directed edge list.

    ``edges`` holds (source, target, weight, delay) tuples; adjacency is the
    symmetric closure, with 'none' entries for outgoing-only neighbors.
    This builder walks the edge list directly and is independent of the
    package's own CSR queries, so tests can use it as an oracle input.
    """
    in_map: dict[int, dict[int, tuple]] = defaultdict(dict)
    nbrs: dict[int, set] = defaultdict(set)
    for u, g, w, dl in edges:
        in_map[g][u] = (float(w), float(dl))
        nbrs[g].add(u)
        nbrs[u].add(g)
    dist = tuple((p * n) // k for p in range(k + 1))
    blocks = []
    for p in range(k):
        lo, hi = dist[p], dist[p + 1]
        adjacency = []
        vertex_state = []
        edge_state = []
        for g in range(lo, hi):
            ns = sorted(nbrs[g])
            adjacency.append(np.asarray(ns, dtype=np.int64))
            entries = []
            for u in ns:
                if u in in_map[g]:
                    entries.append(("syn", in_map[g][u]))
                else:
                    entries.append(("none", ()))
            edge_state.append(entries)
            v0 = float(v_init[g]) if v_init is not None else 0.0
            vertex_state.append(("lif", (v0, 0.0)))
        if coords is not None:
            coords_p = np.asarray(coords[lo:hi], dtype=np.float64)
        else:
            coords_p = np.zeros((hi - lo, 3), dtype=np.float64)
        block_events = [ev for ev in events if lo <= ev.target < hi]
        blocks.append(PartitionBlock.from_lists(
            p, adjacency, coords_p, vertex_state, edge_state, block_events))
    return Network(Distribution(dist), models or DEFAULT_MODELS, tuple(blocks))


def random_edges(rng, n, p):
    """All ordered pairs kept with probability p; plain list of 4-tuples."""
    hit = rng.random((n, n)) < p
    np.fill_diagonal(hit, False)
    out = []
    for u, g in zip(*np.nonzero(hit)):
        out.append((int(u), int(g), round(float(rng.uniform(0.05, 0.2)), 3),
                    float(rng.integers(1, 4))))
    return out


@pytest.fixture
def two_vertex_pair():
    """One directed edge 1 -> 0 (state held at vertex 0)."""
    return build_net(2, 1, [(1, 0, 0.5, 1.0)])


@pytest.fixture
def triangle():
    """Directed 3-cycle 0 -> 1 -> 2 -> 0."""
    return build_net(3, 1, [(0, 1, 0.1, 1.0), (1, 2, 0.1, 1.0),
                            (2, 0, 0.1, 1.0)])


@pytest.fixture
def path4_split():
    """Path 0 -> 1 -> 2 -> 3 over two partitions {0,1} and {2,3}."""
    return build_net(4, 2, [(0, 1, 0.1, 1.0), (1, 2, 0.1, 1.0),
                            (2, 3, 0.1, 1.0)])
