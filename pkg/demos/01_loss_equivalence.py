"""The logistic loss over examples is a function of rados alone.

For a linear model theta, averaging log(1 + exp(-y theta.x)) over the
examples gives the same number as log 2 + (1/m) log of the mean of
exp(-theta.pi) over all 2^m rados.  This script checks it on a small
random dataset, then shows what happens with a few sampled rados.
"""

import numpy as np

from rados import Dataset, enumerate_all_rados, logistic_rado_risk, logloss, uniform_rados

rng = np.random.default_rng(7)
m, d = 10, 3
ds = Dataset(rng.normal(size=(m, d)), rng.choice([-1, 1], size=m))
theta = rng.normal(size=d)

full = enumerate_all_rados(ds)
print(f"{full.n} rados from {m} examples")
print(f"logloss over examples : {logloss(ds, theta):.15f}")
print(f"rado-risk, all rados  : {logistic_rado_risk(full, theta, m):.15f}")

# With a sample of rados the identity only holds approximately.
for n in (8, 64, 512):
    sample = uniform_rados(ds, n, seed=n)
    gap = logloss(ds, theta) - logistic_rado_risk(sample, theta, m)
    print(f"n = {n:4d} sampled rados: logloss - risk = {gap:+.4f}")
