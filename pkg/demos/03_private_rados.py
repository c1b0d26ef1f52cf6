"""Differentially private rados for one sensitive boolean feature.

DPFReal draws uniform signatures and keeps only those whose rado, on the
protected feature, stays inside a window that excludes both tails.  The
narrower the window (smaller epsilon), the more draws get rejected.
"""

import numpy as np

from rados import BoostConfig, Dataset, DpFeatureConfig, dp_beta, dp_interval, dpfreal, radoboost
from rados.losses import zero_one_error
from rados.privacy import acceptance_probability, rejection_bound

rng = np.random.default_rng(3)
m = 200
X = rng.choice([-1.0, 1.0], size=(m, 5))
y = np.where(X[:, 1] + X[:, 2] + 0.5 * rng.normal(size=m) > 0, 1, -1)
ds = Dataset(X, y)

for eps in (0.1, 1.0, 4.0):
    beta = dp_beta(eps)
    window = dp_interval(ds, 0, beta)
    p = float(acceptance_probability(ds, 0, beta))
    rados = dpfreal(ds, DpFeatureConfig(j_star=0, epsilon=eps, n=100, seed=1))
    bound = rejection_bound(m, beta, 100, 0.05)
    model, _ = radoboost(rados, BoostConfig(T=300))
    print(f"eps={eps:<4} window=[{window.lo:7.2f}, {window.hi:6.2f}] accept p={p:.3f} "
          f"draws={rados.metadata['n_R']:4d} (bound {bound}) "
          f"train err={100 * zero_one_error(ds, model):.1f}%")
