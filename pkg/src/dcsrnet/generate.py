"""Deterministic synthetic network construction.

Three topology kinds share one machinery: ``er`` wires each ordered vertex
pair independently with probability p; ``spatial`` scales that probability by
exp(-d^2 / 2 sigma^2) over coordinate distance; ``populations`` groups
vertices into blocks with a per-(source-block, target-block) probability
matrix.

Randomness is fully determined by (seed, stream, vertex): coordinates of
vertex g come from stream (seed, 0, g) and the incoming-edge row of g from
stream (seed, 1, g), each an independent counter-seeded generator.  Per row
the draw order is fixed: topology first, then weights (aligned to ascending
source order), then delays, then the initial membrane potential.  Because
every vertex owns its own streams, the output is identical however the work
is scheduled.

Weights and initial potentials are quantized to the 2^-16 grid and delays are
integer milliseconds.  Sums of a few thousand such weights are exact in
binary64, which makes the simulator's input summation independent of addend
order; together with per-vertex streams this is what makes spike records
byte-stable across repartitionings.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import (
    EDGE,
    NONE_MODEL,
    VERTEX,
    Distribution,
    ModelDef,
    ModelTable,
    Network,
    PartitionBlock,
)
from .fileset import fileset_bytes, save_network
from .textio import FormatError, split_lines

KINDS = ("er", "spatial", "populations")
QUANTUM = 65536.0

_COORD_STREAM = 0
_ROW_STREAM = 1


def _quantize(x):
    return np.round(np.asarray(x, dtype=np.float64) * QUANTUM) / QUANTUM


def _rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, stream, index])))


@dataclass(frozen=True)
class GenSpec:
    """Complete recipe for one synthetic network; the seed fixes every byte
    of the saved fileset."""

    kind: str
    n: int = 0
    p: float = 0.1
    sigma: float = 0.25
    k: int = 1
    seed: int = 0
    box: tuple[float, float] = (0.0, 1.0)
    populations: tuple[int, ...] = ()
    pmatrix: tuple[tuple[float, ...], ...] = ()
    weight: tuple[float, float] = (0.05, 0.15)
    delay: tuple[int, int] = (1, 5)
    v_init: tuple[float, float] = (0.0, 0.5)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "populations":
            if not self.populations:
                raise ValueError("populations kind needs population sizes")
            total = int(sum(self.populations))
            if self.n and self.n != total:
                raise ValueError(f"n={self.n} but population sizes sum to {total}")
            object.__setattr__(self, "n", total)
            npop = len(self.populations)
            if (len(self.pmatrix) != npop
                    or any(len(row) != npop for row in self.pmatrix)):
                raise ValueError(f"pmatrix must be {npop}x{npop}")
            if any(not 0.0 <= v <= 1.0 for row in self.pmatrix for v in row):
                raise ValueError("pmatrix entries must lie in [0, 1]")
            if any(s < 0 for s in self.populations):
                raise ValueError("population sizes must be >= 0")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not self.box[0] < self.box[1]:
            raise ValueError("box must have positive extent")
        if not self.weight[0] <= self.weight[1]:
            raise ValueError("weight range is inverted")
        if not 1 <= self.delay[0] <= self.delay[1]:
            raise ValueError("delays must be integers >= 1, low <= high")
        if not self.v_init[0] <= self.v_init[1]:
            raise ValueError("v_init range is inverted")


def default_models() -> ModelTable:
    return ModelTable((
        ModelDef("lif", VERTEX, 2, (("tau", 10.0), ("v_rest", 0.0),
                                    ("v_th", 1.0), ("v_reset", 0.0),
                                    ("refrac_steps", 2.0))),
        ModelDef("syn", EDGE, 2, ()),
    ))


def _population_index(spec: GenSpec) -> np.ndarray:
    pops = np.zeros(spec.n, dtype=np.int64)
    start = 0
    for idx, size in enumerate(spec.populations):
        pops[start:start + size] = idx
        start += size
    return pops


def _coords(spec: GenSpec) -> np.ndarray:
    lo, hi = spec.box
    coords = np.empty((spec.n, 3), dtype=np.float64)
    pops = _population_index(spec) if spec.kind == "populations" else None
    npop = len(spec.populations)
    for g in range(spec.n):
        u = _rng(spec.seed, _COORD_STREAM, g).random(3)
        if pops is not None:
            # Stack populations along z so the voxel heuristic has structure
            # to find.
            u[2] = (pops[g] + u[2]) / npop
        coords[g] = lo + (hi - lo) * u
    return coords


def _row_sources(spec: GenSpec, g: int, rng: np.random.Generator,
                 coords, pops) -> np.ndarray:
    """Ascending source ids of the edges terminating at g."""
    n = spec.n
    if spec.kind == "er":
        deg = int(rng.binomial(n - 1, spec.p)) if n > 1 else 0
        idx = rng.choice(n - 1, size=deg, replace=False)
        src = idx + (idx >= g)
        src.sort()
        return src.astype(np.int64)
    others = np.concatenate((np.arange(g), np.arange(g + 1, n)))
    if spec.kind == "spatial":
        d2 = np.sum((coords[others] - coords[g]) ** 2, axis=1)
        probs = spec.p * np.exp(-d2 / (2.0 * spec.sigma ** 2))
    else:
        probs = np.asarray(spec.pmatrix, dtype=np.float64)[pops[others], pops[g]]
    hit = rng.random(len(others)) < probs
    return others[hit].astype(np.int64)


def generate(spec: GenSpec) -> Network:
    """Build the network described by ``spec``; always passes validation."""
    n = spec.n
    coords = _coords(spec)
    pops = _population_index(spec) if spec.kind == "populations" else None
    in_src: list[np.ndarray] = []
    in_w: list[np.ndarray] = []
    in_d: list[np.ndarray] = []
    v0 = np.empty(n, dtype=np.float64)
    for g in range(n):
        rng = _rng(spec.seed, _ROW_STREAM, g)
        src = _row_sources(spec, g, rng, coords, pops)
        deg = len(src)
        in_src.append(src)
        in_w.append(_quantize(rng.uniform(spec.weight[0], spec.weight[1], deg)))
        in_d.append(rng.integers(spec.delay[0], spec.delay[1] + 1,
                                 size=deg).astype(np.float64))
        v0[g] = _quantize(rng.uniform(spec.v_init[0], spec.v_init[1]))
    # Transpose the in-rows to find each vertex's outgoing targets.
    degs = np.fromiter((len(s) for s in in_src), np.int64, n)
    tgt_all = np.repeat(np.arange(n, dtype=np.int64), degs)
    src_all = (np.concatenate(in_src) if n else np.zeros(0, np.int64))
    order = np.lexsort((tgt_all, src_all))
    src_sorted = src_all[order]
    tgt_by_src = tgt_all[order]
    bounds = np.searchsorted(src_sorted, np.arange(n + 1, dtype=np.int64))

    dist = Distribution(tuple((p * n) // spec.k for p in range(spec.k + 1)))
    syn_name = "syn"
    blocks = []
    for p in range(spec.k):
        lo, hi = dist.dist[p], dist.dist[p + 1]
        adjacency = []
        edge_models = []
        edge_values = []
        edge_lens = []
        vertex_values = []
        for g in range(lo, hi):
            out_t = tgt_by_src[bounds[g]:bounds[g + 1]]
            nbrs = np.union1d(in_src[g], out_t)
            mask = np.isin(nbrs, in_src[g], assume_unique=True)
            flat = np.empty(2 * len(in_src[g]), dtype=np.float64)
            flat[0::2] = in_w[g]
            flat[1::2] = in_d[g]
            adjacency.append(nbrs)
            edge_models.append(tuple(syn_name if m else NONE_MODEL for m in mask))
            edge_values.append(flat)
            edge_lens.append(np.where(mask, 2, 0).astype(np.int32))
            vertex_values.append((float(v0[g]), 0.0))
        blocks.append(PartitionBlock(
            part_index=p,
            adjacency=tuple(adjacency),
            coords=coords[lo:hi].copy(),
            vertex_models=("lif",) * (hi - lo),
            vertex_values=tuple(vertex_values),
            edge_models=tuple(edge_models),
            edge_values=tuple(edge_values),
            edge_value_lens=tuple(edge_lens),
            events=(),
        ))
    return Network(dist, default_models(), tuple(blocks))


def scaling_run(base: GenSpec, factors, out_dir) -> list[tuple[int, int, int]]:
    """Generate and save scaled variants of ``base``; returns
    (n, directed edge count, total bytes on disk) per factor.

    Factors scale the vertex count; saved filesets land under ``out_dir`` as
    ``scale<i>.*``.  Networks are saved unchecked: generator output validity
    is covered where networks are small enough to walk edge-by-edge.
    """
    rows = []
    for i, f in enumerate(factors):
        spec = replace(base, n=int(round(base.n * f)))
        net = generate(spec)
        prefix = f"{out_dir}/scale{i}"
        save_network(net, prefix, check=False)
        rows.append((spec.n, net.m, fileset_bytes(prefix, spec.k)))
        del net
    return rows


def parse_config(text: str) -> dict[str, str]:
    """Read a key=value config file; '#' starts a comment, blanks ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(split_lines(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key or not val:
            raise FormatError(f"expected key=value, got {raw.strip()!r}",
                              code="PARAM", kind="config", line=lineno)
        out[key] = val
    return out


def _pair(val: str, conv):
    items = [conv(tok.strip()) for tok in val.split(",")]
    if len(items) != 2:
        raise ValueError(f"expected two comma-separated values, got {val!r}")
    return tuple(items)


def spec_from_mapping(mapping: dict[str, str]) -> GenSpec:
    """Build a GenSpec from string key=value pairs (config file or CLI)."""
    fields = dict(mapping)
    kwargs = {}
    if "kind" not in fields:
        raise ValueError("config needs a kind")
    kwargs["kind"] = fields.pop("kind")
    for key, conv in (("n", int), ("k", int), ("seed", int),
                      ("p", float), ("sigma", float)):
        if key in fields:
            kwargs[key] = conv(fields.pop(key))
    for key, conv in (("box", float), ("weight", float), ("delay", int),
                      ("v_init", float)):
        if key in fields:
            kwargs[key] = _pair(fields.pop(key), conv)
    if "populations" in fields:
        kwargs["populations"] = tuple(
            int(tok) for tok in fields.pop("populations").split(","))
    if "pmatrix" in fields:
        kwargs["pmatrix"] = tuple(
            tuple(float(tok) for tok in row.split(","))
            for row in fields.pop("pmatrix").split(";"))
    if fields:
        raise ValueError(f"unknown config keys: {sorted(fields)}")
    return GenSpec(**kwargs)
