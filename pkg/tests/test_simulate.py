"""Reference LIF dynamics, event handling, checkpoint/restart equality."""

from collections import defaultdict

import numpy as np
import pytest

from dcsrnet import (
    Event,
    FormatError,
    LifParams,
    ModelDef,
    ModelTable,
    SimConfig,
    SimState,
    Simulation,
    checkpoint,
    embed,
    lif_step,
    restore,
    run,
    save_network,
    spikes_text,
    state_of,
    validate,
)
from conftest import DEFAULT_MODELS, build_net, random_edges

P = LifParams(tau=10.0, v_rest=0.0, v_th=1.0, v_reset=0.0, refrac_steps=0)


# ------------------------------------------------------------- lif_step

def test_lif_step_rest_is_fixed_point():
    assert lif_step(0.0, 0, 0.0, P, 1.0) == (0.0, 0, False)
    shifted = LifParams(tau=10.0, v_rest=-65.0)
    v, r, spiked = lif_step(-65.0, 0, 0.0, shifted, 1.0)
    assert (v, r, spiked) == (-65.0, 0, False)


def test_lif_step_decays_toward_rest():
    v, r, spiked = lif_step(0.5, 0, 0.0, P, 1.0)
    assert v == pytest.approx(0.45)
    assert not spiked
    v, _, _ = lif_step(-0.5, 0, 0.0, P, 1.0)
    assert v == pytest.approx(-0.45)


def test_lif_step_refractory_counts_down_and_ignores_input():
    params = LifParams(refrac_steps=2)
    assert lif_step(0.7, 2, 5.0, params, 1.0) == (0.0, 1, False)
    assert lif_step(0.0, 1, 5.0, params, 1.0) == (0.0, 0, False)
    # Counter exhausted: the next step integrates again.
    v, r, spiked = lif_step(0.0, 0, 5.0, params, 1.0)
    assert spiked and r == 2


def test_lif_constant_drive_crosses_threshold_on_step_seven():
    # v_{i+1} = 0.9 v_i + 0.2 so v_6 = 2 (1 - 0.9^6) and the seventh update
    # lands at 1.0434, past threshold.
    v, r = 0.0, 0
    for i in range(6):
        v, r, spiked = lif_step(v, r, 0.2, P, 1.0)
        assert not spiked
    assert v == pytest.approx(2.0 * (1.0 - 0.9 ** 6))
    crossing = 0.9 * v + 0.2
    assert crossing == pytest.approx(1.0434062, abs=1e-6)
    v, r, spiked = lif_step(v, r, 0.2, P, 1.0)
    assert spiked and v == 0.0


def test_single_neuron_trace_first_spike_at_t7():
    net = build_net(1, 1, [])
    sim = Simulation(net, SimConfig(dt=1.0, steps=0, drive=0.2))
    expected = [2.0 * (1.0 - 0.9 ** (i + 1)) for i in range(6)]
    for want in expected:
        sim.run_steps(1)
        assert sim.v[0] == pytest.approx(want)
    sim.run_steps(1)
    assert sim.spikes == [(7.0, 0)]
    assert sim.v[0] == 0.0


# ------------------------------------------------------------- two neurons

def test_two_neuron_relay():
    # Neuron 1 charges to threshold at t=7; its spike travels the 1->0 edge
    # with delay 2 (arrives t=9) and a superthreshold weight, so neuron 0
    # fires on the next integration step, at t=10.
    net = build_net(2, 1, [(1, 0, 1.5, 2.0)])
    sim = Simulation(net, SimConfig(dt=1.0, steps=0,
                                    drive=np.array([0.0, 0.2])))
    sim.run_steps(12)
    assert sim.spikes == [(7.0, 1), (10.0, 0)]


def test_zero_steps_is_identity(tmp_path):
    net = build_net(3, 2, [(0, 1, 0.5, 1.0)],
                    events=(Event(target=1, source=0, time=4.0),))
    out, spikes = run(net, SimConfig(dt=1.0, steps=0))
    assert spikes == []
    save_network(net, str(tmp_path / "a"))
    save_network(out, str(tmp_path / "b"))
    for path in sorted(tmp_path.glob("a.*")):
        assert path.read_bytes() == (tmp_path / ("b" + path.name[1:])).read_bytes()


def test_quiet_network_stays_quiet():
    rng = np.random.default_rng(2)
    n = 20
    net = build_net(n, 2, random_edges(rng, n, 0.2))
    out, spikes = run(net, SimConfig(dt=1.0, steps=50))
    assert spikes == []
    assert list(out.events()) == []
    assert net.models.get("lif").param("time") is None
    assert out.models.get("lif").param("time") == 50.0


# ------------------------------------------------------------- oracle

def oracle_run(n, edges, drive, params, steps, v0=None):
    """Dict-based reimplementation of the stepping loop, built straight from
    the edge list; arrival bookkeeping uses integer step counts only."""
    weight = {(u, g): w for u, g, w, _ in edges}
    out = defaultdict(list)
    for u, g, _, d in edges:
        out[u].append((g, int(d)))
    v = [0.0] * n if v0 is None else [float(x) for x in v0]
    r = [0] * n
    arriving = defaultdict(list)
    spikes = []
    for step in range(steps):
        i_syn = [float(x) for x in drive]
        for target, source in sorted(arriving.pop(step, [])):
            i_syn[target] += weight[(source, target)]
        for g in range(n):
            v[g], r[g], spiked = lif_step(v[g], r[g], i_syn[g], params, 1.0)
            if spiked:
                spikes.append((float(step + 1), g))
                for target, dsteps in out[g]:
                    arriving[step + 1 + dsteps].append((target, g))
    return v, r, spikes


def test_vectorized_loop_matches_scalar_oracle():
    rng = np.random.default_rng(17)
    models = ModelTable((
        ModelDef("lif", "vertex", 2, (("tau", 10.0), ("v_rest", 0.0),
                                      ("v_th", 1.0), ("v_reset", 0.0),
                                      ("refrac_steps", 3.0))),
        ModelDef("syn", "edge", 2, ()),
    ))
    params = LifParams(refrac_steps=3)
    for trial in range(5):
        n = int(rng.integers(3, 25))
        edges = random_edges(rng, n, 0.25)
        v0 = rng.uniform(0.0, 0.5, n)
        drive = rng.uniform(0.0, 0.25, n)
        net = build_net(n, int(rng.integers(1, 4)), edges, v_init=v0,
                        models=models)
        sim = Simulation(net, SimConfig(dt=1.0, steps=0, drive=drive))
        sim.run_steps(40)
        ev, er2, espikes = oracle_run(n, edges, drive, params, 40, v0=v0)
        assert sim.spikes == espikes
        assert sim.v.tolist() == ev
        assert sim.r.tolist() == er2


def test_event_conservation_one_event_per_outgoing_edge():
    # Vertex 0 starts at threshold and fires on step 1; each outgoing edge
    # gets exactly one pending event at (1 + delay) * dt.
    edges = [(0, 1, 0.05, 2.0), (0, 2, 0.05, 5.0), (1, 0, 0.05, 1.0)]
    net = build_net(3, 1, edges, v_init=[2.0, 0.0, 0.0])
    sim = Simulation(net, SimConfig(dt=1.0, steps=0))
    sim.run_steps(1)
    assert sim.spikes == [(1.0, 0)]
    pending = sorted((e.time, e.target, e.source) for e in sim.state().pending)
    assert pending == [(3.0, 1, 0), (6.0, 2, 0)]
    # Delivery consumes them without replacement.
    sim.run_steps(9)
    assert sim.state().pending == ()


# ------------------------------------------------------------- checkpoints

def test_checkpoint_at_time_zero_equals_plain_save(tmp_path):
    net = build_net(4, 2, [(0, 1, 0.5, 1.0)],
                    events=(Event(target=1, source=0, time=2.0),))
    checkpoint(state_of(net), net, str(tmp_path / "ck"))
    save_network(net, str(tmp_path / "plain"))
    for path in sorted(tmp_path.glob("plain.*")):
        twin = tmp_path / ("ck" + path.name[len("plain"):])
        assert path.read_bytes() == twin.read_bytes()


def test_restart_reproduces_uninterrupted_run(tmp_path):
    rng = np.random.default_rng(5)
    n = 24
    net = build_net(n, 3, random_edges(rng, n, 0.25),
                    v_init=rng.uniform(0, 0.5, n))
    cfg_half = SimConfig(dt=1.0, steps=13, drive=0.12)
    cfg_full = SimConfig(dt=1.0, steps=26, drive=0.12)

    full_net, full_spikes = run(net, cfg_full)
    save_network(full_net, str(tmp_path / "full"))

    half_net, half_spikes = run(net, cfg_half)
    assert half_net.models.get("lif").param("time") == 13.0
    save_network(half_net, str(tmp_path / "ck"))
    state, net2 = restore(str(tmp_path / "ck"))
    assert state.time == 13.0
    resumed_net, tail_spikes = run(net2, cfg_half)
    save_network(resumed_net, str(tmp_path / "resumed"))

    assert full_spikes == half_spikes + tail_spikes
    for path in sorted(tmp_path.glob("full.*")):
        twin = tmp_path / ("resumed" + path.name[len("full"):])
        assert path.read_bytes() == twin.read_bytes(), path.name
    assert full_spikes, "fixture should actually spike"


def test_resume_requires_time_on_step_grid():
    net = build_net(2, 1, [(0, 1, 0.5, 1.0)])
    state = SimState(time=1.3, v=np.zeros(2), r=np.zeros(2, dtype=np.int64),
                     pending=())
    with pytest.raises(ValueError, match="multiple of dt"):
        Simulation(net, SimConfig(dt=1.0, steps=1), state)


def test_restore_rejects_event_in_wrong_partition(tmp_path):
    net = build_net(4, 2, [(0, 1, 0.5, 1.0)],
                    events=(Event(target=3, source=0, time=5.0),))
    save_network(net, str(tmp_path / "net"))
    line = (tmp_path / "net.event.1").read_text()
    (tmp_path / "net.event.1").write_text("")
    (tmp_path / "net.event.0").write_text(line)
    with pytest.raises(FormatError) as err:
        restore(str(tmp_path / "net"))
    assert err.value.code == "EVTOWNER"


# ------------------------------------------------------------- event edge cases

def test_opaque_event_types_round_trip_while_pending(tmp_path):
    pulse = Event(target=0, source=1, time=80.0, type="pulse", data=(0.7, -1.0))
    net = build_net(2, 1, [(1, 0, 0.5, 1.0)], events=(pulse,))
    out, _ = run(net, SimConfig(dt=1.0, steps=5))
    assert list(out.events()) == [Event(target=0, source=1, time=80.0,
                                        type="pulse", data=(0.7, -1.0))]
    save_network(out, str(tmp_path / "net"))
    assert "80 pulse 0.7 -1" in (tmp_path / "net.event.0").read_text()


def test_unknown_event_type_consumed_without_effect():
    pulse = Event(target=0, source=1, time=2.0, type="pulse", data=(9.0,))
    base = build_net(2, 1, [(1, 0, 0.5, 1.0)])
    perturbed = build_net(2, 1, [(1, 0, 0.5, 1.0)], events=(pulse,))
    out_a, spikes_a = run(base, SimConfig(dt=1.0, steps=5))
    out_b, spikes_b = run(perturbed, SimConfig(dt=1.0, steps=5))
    assert spikes_a == spikes_b == []
    assert state_of(out_a).v.tolist() == state_of(out_b).v.tolist()
    assert list(out_b.events()) == []


def test_spike_event_without_edge_is_an_error():
    net = build_net(2, 1, [(0, 1, 0.5, 1.0)],
                    events=(Event(target=0, source=1, time=3.0),))
    assert validate(net).ok
    sim = Simulation(net, SimConfig(dt=1.0, steps=0))
    with pytest.raises(ValueError, match="nonexistent edge"):
        sim.run_steps(5)


# ------------------------------------------------------------- guards

def test_delay_must_divide_dt():
    net = build_net(2, 1, [(1, 0, 0.5, 1.5)])
    with pytest.raises(ValueError, match="delay"):
        Simulation(net, SimConfig(dt=1.0, steps=1))
    # Delay below one step is also out.
    net2 = build_net(2, 1, [(1, 0, 0.5, 1.0)])
    with pytest.raises(ValueError, match="delay"):
        Simulation(net2, SimConfig(dt=2.0, steps=1))
    # Fractional dt with a divisible delay is fine.
    Simulation(net2, SimConfig(dt=0.5, steps=1))


def test_drive_shape_checked():
    net = build_net(3, 1, [])
    with pytest.raises(ValueError, match="drive"):
        Simulation(net, SimConfig(dt=1.0, steps=1, drive=[0.1, 0.2]))


def test_non_lif_vertex_state_rejected():
    models = ModelTable((ModelDef("izh", "vertex", 3, ()),
                         ModelDef("syn", "edge", 2, ())))
    from dcsrnet import Distribution, Network, PartitionBlock

    block = PartitionBlock.from_lists(
        0, [np.array([], dtype=np.int64)], np.zeros((1, 3)),
        [("izh", (0.0, 0.0, 0.0))], [[]])
    net = Network(Distribution((0, 1)), models, (block,))
    with pytest.raises(ValueError):
        state_of(net)
    with pytest.raises(ValueError):
        LifParams.from_table(models)


def test_sim_state_arrays_frozen():
    net = build_net(2, 1, [(0, 1, 0.5, 1.0)])
    state = state_of(net)
    with pytest.raises(ValueError):
        state.v[0] = 9.0


def test_spikes_text_canonical():
    assert spikes_text([(7.0, 1), (10.5, 0)]) == "7 1\n10.5 0\n"
    assert spikes_text([]) == ""


def test_embed_time_param_only_when_nonzero():
    net = build_net(2, 1, [(0, 1, 0.5, 1.0)])
    out, _ = run(net, SimConfig(dt=1.0, steps=4))
    assert out.models.get("lif").param("time") == 4.0
    again = embed(SimState(time=0.0, v=np.zeros(2),
                           r=np.zeros(2, dtype=np.int64), pending=()), out)
    assert again.models.get("lif").param("time") is None
