"""RadoBoost against AdaBoost-SS when training data is protected by Gaussian noise.

Each training fold gets N(0, varsigma^2) noise on every feature; test folds
stay clean.  delta_perr is RadoBoost's error minus AdaBoost-SS's on the same
noisy folds, so negative values favour learning from rados.
"""

from rados import ExperimentSpec, load_haberman, run_noise_sweep

spec = ExperimentSpec(T=300, sigmas=(0.0, 5.0, 20.0), repeats=2, weak="median")
table = run_noise_sweep(spec, ["uniform", "support=0.25", "support=0.75"], load_haberman())
print(table.rows_csv())
