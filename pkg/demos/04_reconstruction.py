"""When do rados give the examples away?

If the learner also knows which examples every rado sums (the support
matrix S), the edges solve a linear system E S = Pi.  With at least m
rados and S of full rank the edges come back exactly.  Otherwise many
datasets fit; splitting one example in two gives a dataset with the same
rados but different edges.
"""

import numpy as np

from rados import (Dataset, UnderdeterminedError, ambiguity_witness, compute_rados, hausdorff,
                   recover_edges, sample_uniform_signatures, signatures_to_selection)
from rados.reconstruction import edge_matrix

rng = np.random.default_rng(11)
ds = Dataset(rng.normal(size=(6, 3)), rng.choice([-1, 1], size=6))
E = edge_matrix(ds)

sigmas = sample_uniform_signatures(6, 10, seed=4)
S = signatures_to_selection(sigmas, ds.y)
Pi = compute_rados(ds, sigmas).values.T
rec = recover_edges(Pi, S)
print("10 rados:", rec.report())
print("max |E - recovered| =", np.abs(rec.E - E).max())

few = sigmas[:5]
try:
    recover_edges(compute_rados(ds, few).values.T, signatures_to_selection(few, ds.y))
except UnderdeterminedError as exc:
    print("5 rados:", exc)

twin, twin_sigmas = ambiguity_witness(ds, sigmas, split_index=2, e_star=0.3 * E[:, 2] + 0.5)
same = np.abs(compute_rados(twin, twin_sigmas).values - Pi.T).max()
print(f"witness with {twin.m} examples: rado change {same:.1e}, "
      f"Hausdorff distance {hausdorff(E, edge_matrix(twin)):.3f}")
