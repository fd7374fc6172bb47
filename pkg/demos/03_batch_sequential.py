"""Grow a design in batches while the correlation length evolves.

Early batches run at a tiny rho (aggressively space-filling); later batches
run at larger rho once shorter-range structure matters.  With the projection
constraint on, no two points in the final design share a coordinate in any
dimension, so every one-dimensional margin stays fully stratified, and the
constraint holds across batches, not just within them.
"""

import numpy as np

from dppdesign import (CandidateSet, KernelSpec, SequentialState,
                       build_kernel_matrix, sequential_design)

m = 13
axis = (np.arange(m) + 0.5) / m
mesh = np.meshgrid(axis, axis, indexing="ij")
cand = CandidateSet(np.stack([g.ravel() for g in mesh], axis=1))
K = build_kernel_matrix(cand, KernelSpec("gaussian_iso", 1e-8))

state = SequentialState(rho_schedule=(1e-8, 1e-4, 1e-2),
                        batch_sizes=(5, 4, 3))
design = sequential_design(K, state, enforce_projection=True,
                           tie_rng=np.random.default_rng(7))

start = 0
for b, nb in enumerate(state.batch_sizes):
    ids = design.indices[start:start + nb]
    print("batch %d (rho=%g): ids %s" % (b, state.rho_schedule[b], ids.tolist()))
    start += nb

for dim in range(2):
    vals = np.sort(np.round(design.coords[:, dim], 9))
    print("dimension %d coordinates: %s" % (dim, vals.tolist()))
    assert np.unique(vals).size == design.n, "collapse in dimension %d" % dim
print("no two of the %d points share a coordinate in either dimension"
      % design.n)

occ = np.zeros((m, m), dtype=int)
ij = np.round(design.coords * m - 0.5).astype(int)
for b, (i, j) in enumerate(ij):
    occ[i, j] = 1 + np.searchsorted(np.cumsum(state.batch_sizes), b,
                                    side="right")
print("\nbatches on the grid (1, 2, 3 in selection order):")
for row in occ:
    print("".join(".123"[v] for v in row))
