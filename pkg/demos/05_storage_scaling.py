#!/usr/bin/env python3
"""Measure how on-disk size grows with the synapse count.

Vertex-and-coordinate overhead is linear in n and tiny next to the edge
payload, so total bytes track the directed edge count m almost perfectly.
"""

import tempfile

import numpy as np

from dcsrnet import GenSpec, scaling_run

base = GenSpec(kind="er", n=500, p=0.02, seed=77)
rows = scaling_run(base, [1.0, 2.0, 4.0, 8.0], tempfile.mkdtemp())

print("      n         m       bytes   bytes/m")
for n, m, size in rows:
    print(f"{n:>7} {m:>9} {size:>11} {size / m:>9.2f}")

m = np.array([r[1] for r in rows], dtype=float)
size = np.array([r[2] for r in rows], dtype=float)
slope, intercept = np.polyfit(m, size, 1)
pred = slope * m + intercept
r2 = 1 - float(np.sum((size - pred) ** 2) / np.sum((size - size.mean()) ** 2))
print(f"\nlinear fit: bytes = {slope:.2f} * m + {intercept:.0f},  R^2 = {r2:.6f}")
print(f"doubling n quadruples m: m ratio {m[-1] / m[-2]:.3f}, "
      f"bytes ratio {size[-1] / size[-2]:.3f}")
