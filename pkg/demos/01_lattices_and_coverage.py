"""From a frequency set to a sampling set.

Run with ``python3 demos/01_lattices_and_coverage.py``.

A single rank-1 lattice reconstructs a frequency set only when every
frequency lands on its own residue, and for hyperbolic crosses that forces
the lattice to be much larger than the set.  Several small lattices, each
covering part of the set without collisions, get by with far fewer
samples.  This script walks through that construction on a 3D cross.
"""

# %% A symmetric hyperbolic cross
import math

import numpy as np

from mlfft import (
    ConstructionParams,
    build_multiple_lattice,
    build_single_lattice_cbc,
    coverage_counts,
    distinct_node_count,
    generate_hc,
)

I = generate_hc(3, 32, 0.0)
print(f"|I| = {len(I)} frequencies in d = {I.dim}; largest |k_s| = {int(np.abs(I.frequencies).max())}")

# %% Draw components until every frequency is alias-free somewhere
ml, report = build_multiple_lattice(I, ConstructionParams(seed=2024))
print(f"\nL = {ml.L} components (cap {report.L_max}), lambda = {report.lambda_:g}")
counts, masks = coverage_counts(I, ml)
for comp, mask in zip(ml.components, masks):
    print(f"  M = {comp.M:6d}  z = {comp.z}  alias-free: {int(mask.sum()):5d} ({mask.mean():.0%})")
print(f"draws that added nothing and were discarded: {report.rejected_components}")
print(f"frequencies seen by 1, 2, 3.. components: {np.bincount(counts)[1:].tolist()}")

# %% What it costs
total = ml.total_size
print(f"\nsum of lattice sizes M = {total}  (M/|I| = {total / len(I):.2f},"
      f" M/(|I| ln|I|) = {total / (len(I) * math.log(len(I))):.2f})")
print(f"distinct nodes = {distinct_node_count(ml)}  (only the origin is shared: {total - ml.L + 1})")

single = build_single_lattice_cbc(I, seed=0)
print(f"a single reconstructing lattice found by a CBC search needs M = {single.M}"
      f" (M/|I| = {single.M / len(I):.2f})")

# %% Growth along the refinement
print("\n   N    |I|    L        M   M/|I|")
for j in range(1, 8):
    Ij = generate_hc(3, 2**j, 0.0)
    mlj, _ = build_multiple_lattice(Ij, ConstructionParams(seed=j))
    print(f"{2**j:4d} {len(Ij):6d} {mlj.L:4d} {mlj.total_size:8d} {mlj.total_size / len(Ij):7.2f}")
