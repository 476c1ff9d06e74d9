"""Deterministic discrete-time LIF simulation over a partitioned network.

The clock is an integer step counter; every timestamp is computed as
step * dt, never accumulated, so a resumed run reproduces the exact float
timestamps of an uninterrupted one.  Per step the simulator: delivers
pending spike events whose arrival lies within half a step of the current
time (summing synapse weights in ascending (target, source) order on top of
the constant drive), advances every membrane by one Euler step of
v' = v + dt * (-(v - v_rest) / tau) + I, records threshold crossings at
(step+1) * dt, and enqueues one event per outgoing edge at delay steps after
the spike.  Refractory vertices hold at v_reset and ignore input while their
counter drains.

All mutable dynamics live in :class:`SimState` (membrane potential and
refractory counter per vertex, plus the pending-event queue); the topology
side stays an immutable network.  ``embed`` writes a state back into a
network - including the clock, carried as a reserved ``time`` parameter on
the "lif" model line - which is all a checkpoint is.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .fileset import load_network, save_network
from .model import NONE_MODEL, VERTEX, Event, Network, PartitionBlock, owner_of
from .textio import format_float, format_int

LIF_MODEL = "lif"
SYN_MODEL = "syn"
TIME_PARAM = "time"

_REL_TOL = 1e-9


@dataclass(frozen=True)
class LifParams:
    tau: float = 10.0
    v_rest: float = 0.0
    v_th: float = 1.0
    v_reset: float = 0.0
    refrac_steps: int = 0

    @classmethod
    def from_table(cls, models) -> "LifParams":
        entry = models.get(LIF_MODEL)
        if entry is None or entry.kind != VERTEX or entry.state_size != 2:
            raise ValueError("network does not declare a 'lif' vertex model "
                             "of state size 2")
        base = cls()
        return cls(
            tau=entry.param("tau", base.tau),
            v_rest=entry.param("v_rest", base.v_rest),
            v_th=entry.param("v_th", base.v_th),
            v_reset=entry.param("v_reset", base.v_reset),
            refrac_steps=int(entry.param("refrac_steps", base.refrac_steps)),
        )


def lif_step(v: float, r: int, i_syn: float, params: LifParams,
             dt: float) -> tuple[float, int, bool]:
    """One membrane update; the vectorized path mirrors this exactly."""
    if r > 0:
        return params.v_reset, r - 1, False
    v2 = v + dt * (-(v - params.v_rest) / params.tau) + i_syn
    if v2 >= params.v_th:
        return params.v_reset, params.refrac_steps, True
    return v2, 0, False


@dataclass(frozen=True)
class SimConfig:
    """Run parameters: step size, step count, and optional constant drive
    (scalar for all vertices or one value per vertex)."""

    dt: float = 1.0
    steps: int = 0
    drive: object = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


@dataclass(frozen=True)
class SimState:
    """Dynamic half of a simulation: clock, membranes, pending events."""

    time: float
    v: np.ndarray
    r: np.ndarray
    pending: tuple[Event, ...]

    def __post_init__(self):
        self.v.setflags(write=False)
        self.r.setflags(write=False)


def state_of(net: Network) -> SimState:
    """Extract the dynamic state a network carries."""
    n = net.n
    v = np.empty(n, dtype=np.float64)
    r = np.empty(n, dtype=np.int64)
    g = 0
    for block in net.partitions:
        for i in range(block.n_local):
            name, vals = block.vertex_entry(i)
            if name != LIF_MODEL or len(vals) != 2:
                raise ValueError(f"vertex {g} does not carry lif state")
            v[g] = vals[0]
            r[g] = int(vals[1])
            g += 1
    entry = net.models.get(LIF_MODEL)
    time = entry.param(TIME_PARAM, 0.0) if entry is not None else 0.0
    pending = tuple(sorted(net.events(), key=lambda e: e.sort_key()))
    return SimState(time=float(time), v=v, r=r, pending=pending)


def embed(state: SimState, net: Network) -> Network:
    """Write a state back into a network: vertex tuples, event files, clock.

    The clock is stored as a ``time`` param on the lif model line; at time
    zero the param is omitted so a never-run network round-trips unchanged.
    """
    if state.time > 0.0:
        models = net.models.with_param(LIF_MODEL, TIME_PARAM, state.time)
    else:
        models = net.models.without_param(LIF_MODEL, TIME_PARAM)
    dist = net.distribution
    buckets: list[list[Event]] = [[] for _ in range(net.k)]
    for ev in state.pending:
        buckets[owner_of(dist, ev.target)].append(ev)
    blocks = []
    for p, block in enumerate(net.partitions):
        lo = dist.dist[p]
        vertex_values = tuple(
            (float(state.v[lo + i]), float(state.r[lo + i]))
            for i in range(block.n_local))
        blocks.append(PartitionBlock(
            part_index=block.part_index,
            adjacency=block.adjacency,
            coords=block.coords,
            vertex_models=block.vertex_models,
            vertex_values=vertex_values,
            edge_models=block.edge_models,
            edge_values=block.edge_values,
            edge_value_lens=block.edge_value_lens,
            events=tuple(sorted(buckets[p], key=lambda e: e.sort_key())),
        ))
    return Network(dist, models, tuple(blocks))


class Simulation:
    """Stepper binding a network's topology to a mutable SimState."""

    def __init__(self, net: Network, cfg: SimConfig, state: SimState | None = None):
        self.net = net
        self.cfg = cfg
        self.params = LifParams.from_table(net.models)
        n = net.n
        state = state_of(net) if state is None else state
        step = round(state.time / cfg.dt)
        if abs(step * cfg.dt - state.time) > _REL_TOL * max(1.0, abs(state.time)):
            raise ValueError(
                f"stored time {state.time} is not a multiple of dt={cfg.dt}")
        self.step = int(step)
        self.v = state.v.copy()
        self.r = state.r.copy()
        self.heap: list[tuple] = [
            (ev.time, ev.target, ev.source, ev.type, ev.data)
            for ev in state.pending]
        heapq.heapify(self.heap)
        self.spikes: list[tuple[float, int]] = []
        if cfg.drive is None:
            self.drive = np.zeros(n, dtype=np.float64)
        elif np.ndim(cfg.drive) == 0:
            self.drive = np.full(n, float(cfg.drive), dtype=np.float64)
        else:
            drive = np.asarray(cfg.drive, dtype=np.float64)
            if drive.shape != (n,):
                raise ValueError(f"drive must be scalar or length {n}")
            self.drive = drive.copy()
        self._build_edges()

    def _build_edges(self) -> None:
        net, dt = self.net, self.cfg.dt
        n = net.n
        self.in_w: list[dict[int, float]] = [dict() for _ in range(n)]
        out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        g = 0
        for block in net.partitions:
            for i in range(block.n_local):
                nbrs = block.adjacency[i]
                for j, (name, vals) in enumerate(block.edge_entries(i)):
                    if name == NONE_MODEL:
                        continue
                    if name != SYN_MODEL or len(vals) != 2:
                        raise ValueError(
                            f"vertex {g}: edge model {name!r} is not a "
                            "(weight, delay) synapse")
                    src = int(nbrs[j])
                    w, d = vals
                    steps = round(d / dt)
                    if steps < 1 or abs(steps * dt - d) > _REL_TOL * max(1.0, abs(d)):
                        raise ValueError(
                            f"edge {src}->{g}: delay {d} is not a positive "
                            f"multiple of dt={dt}")
                    self.in_w[g][src] = w
                    out[src].append((g, steps))
                g += 1
        for lst in out:
            lst.sort()
        self.out = out

    def run_steps(self, count: int) -> None:
        p = self.params
        dt = self.cfg.dt
        half = dt / 2
        for _ in range(count):
            step = self.step
            t_now = step * dt
            i_syn = self.drive.copy()
            delivered = []
            while self.heap and self.heap[0][0] < t_now + half:
                time, target, source, etype, _data = heapq.heappop(self.heap)
                # Events older than the window cannot arise from files this
                # package writes; drop them rather than deliver late.
                if time < t_now - half:
                    continue
                if etype == "spike":
                    delivered.append((target, source))
            delivered.sort()
            for target, source in delivered:
                w = self.in_w[target].get(source)
                if w is None:
                    raise ValueError(f"event for nonexistent edge "
                                     f"{source}->{target}")
                i_syn[target] += w
            refr = self.r > 0
            v2 = self.v + dt * (-(self.v - p.v_rest) / p.tau) + i_syn
            spiked = ~refr & (v2 >= p.v_th)
            self.v = np.where(refr | spiked, p.v_reset, v2)
            self.r = np.where(refr, self.r - 1,
                              np.where(spiked, p.refrac_steps, 0))
            t_next = (step + 1) * dt
            for g in np.nonzero(spiked)[0]:
                g = int(g)
                self.spikes.append((t_next, g))
                for target, dsteps in self.out[g]:
                    heapq.heappush(self.heap, ((step + 1 + dsteps) * dt,
                                               target, g, "spike", ()))
            self.step = step + 1

    def state(self) -> SimState:
        pending = tuple(Event(target=t, source=s, time=tm, type=ty, data=da)
                        for tm, t, s, ty, da in sorted(self.heap))
        return SimState(time=self.step * self.cfg.dt, v=self.v.copy(),
                        r=self.r.copy(), pending=pending)


def run(net: Network, cfg: SimConfig) -> tuple[Network, list[tuple[float, int]]]:
    """Advance ``net`` by cfg.steps; returns (final network, spike record).

    The final network embeds the end-of-run membranes, clock and in-flight
    events; the spike record lists (time, vertex) sorted by (time, vertex).
    """
    sim = Simulation(net, cfg)
    sim.run_steps(cfg.steps)
    return embed(sim.state(), net), sim.spikes


def checkpoint(state: SimState, net: Network, prefix: str):
    """Persist a mid-run state as a canonical fileset."""
    return save_network(embed(state, net), prefix)


def restore(prefix: str) -> tuple[SimState, Network]:
    """Load a fileset and split it into dynamic state and network."""
    net = load_network(prefix)
    return state_of(net), net


def spikes_text(records) -> str:
    """Render a spike record as canonical 'time vertex' lines."""
    out = []
    for time, vertex in records:
        out.append(format_float(time) + " " + format_int(vertex) + "\n")
    return "".join(out)
