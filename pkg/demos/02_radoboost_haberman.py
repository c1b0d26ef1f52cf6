"""Boosting from rados on Haberman's survival data.

RadoBoost never looks at an individual patient: it receives n rados, each
a sum of label-scaled records, and fits a linear classifier to them.  We
compare its 10-fold cross-validated error with AdaBoost-SS trained on the
raw examples.
"""

from rados import BoostConfig, ExperimentSpec, load_haberman, radoboost, run_cv_experiment, uniform_rados
from rados.boosting import boosting_bound
from rados.losses import exp_rado_risk, zero_one_error

ds = load_haberman()
print(f"Haberman: m={ds.m}, d={ds.d}, positives={int((ds.y == 1).sum())}")

# One model on the whole dataset, from 153 random rados.
rados = uniform_rados(ds, ds.m // 2, seed=0)
model, trace = radoboost(rados, BoostConfig(T=200))
print(f"training error after 200 rounds: {100 * zero_one_error(ds, model):.2f}%")
print(f"exp rado-risk {exp_rado_risk(rados, model):.3e} <= bound {boosting_bound(trace):.3e}")

# The full cross-validation protocol (T=1000, n=min(1000, fold/2)).
for algorithm in ("radoboost", "adaboost_ss"):
    result = run_cv_experiment(ExperimentSpec(algorithm=algorithm))
    print(f"{algorithm:12s} {result.mean:6.2f} +- {result.std:.2f}")
