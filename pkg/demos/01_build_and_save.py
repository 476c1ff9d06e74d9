#!/usr/bin/env python3
"""Build a four-neuron network in memory, save it, and read it back.

The fileset written here is byte-identical to demos/data/tutorial.*:
a chain 0 -> 1 -> 2 plus an isolated vertex, split over two partitions,
with one spike already in flight toward vertex 1.
"""

import filecmp
import tempfile
from pathlib import Path

from dcsrnet import (
    Event,
    FilesetPath,
    ModelDef,
    ModelTable,
    Network,
    PartitionBlock,
    load_network,
    save_network,
    validate,
)
from dcsrnet.model import VERTEX, EDGE, Distribution

HERE = Path(__file__).resolve().parent

models = ModelTable((
    ModelDef("lif", VERTEX, 2, (("tau", 10.0), ("v_rest", 0.0),
                                ("v_th", 1.0), ("v_reset", 0.0),
                                ("refrac_steps", 2.0))),
    ModelDef("syn", EDGE, 2, ()),
))

# Partition 0 owns vertices 0..1, partition 1 owns 2..3.  Neighbor lists are
# undirected; 'none' marks a neighbor wired only by an outgoing edge, so the
# weight/delay pair lives with the edge's target.
block0 = PartitionBlock.from_lists(
    0,
    adjacency=[[1], [0, 2]],
    coords=[[0.0, 0.5, 0.0], [1.0, 0.5, 0.0]],
    vertex_state=[("lif", (0.0, 0.0)), ("lif", (0.25, 0.0))],
    edge_state=[[("none", ())],
                [("syn", (0.5, 1.0)), ("none", ())]],
    events=(Event(target=1, source=0, time=3.0),),
)
block1 = PartitionBlock.from_lists(
    1,
    adjacency=[[1], []],
    coords=[[2.0, 0.5, 0.0], [3.0, 0.5, 0.0]],
    vertex_state=[("lif", (0.0, 0.0)), ("lif", (0.0, 0.0))],
    edge_state=[[("syn", (0.125, 2.0))], []],
)
net = Network(Distribution((0, 2, 4)), models, (block0, block1))

report = validate(net)
print(f"validate: {'clean' if report.ok else report}")
print(f"n={net.n} k={net.k} directed edges m={net.m}")

out = Path(tempfile.mkdtemp()) / "tutorial"
save_network(net, str(out))
print(f"\nwrote {out}.*:")
for path in FilesetPath(str(out)).all_files(net.k):
    print(f"  {path.name:<18} {path.stat().st_size:>4} bytes")

for path in FilesetPath(str(out)).all_files(net.k):
    ref = HERE / "data" / f"tutorial{path.name[len(out.name):]}"
    assert filecmp.cmp(path, ref, shallow=False), path.name
print("\nevery file matches demos/data/ byte for byte")

back = load_network(str(out))
assert back.m == net.m and back.events() == net.events()
print("reloaded network carries the same edges and pending events")
