"""Learning linear classifiers from Rademacher observations (rados)."""

__version__ = "0.1.0"

from .baseline import adaboost_ss, example_edge, example_weights_from_rado_weights
from .boosting import (BoostConfig, BoostTrace, ClampedStrong, LambdaPrudential,
                       MedianPrudential, Strong, boosting_bound, leveraging,
                       normalized_edge, parse_weak, radoboost, weak_pick, weight_update)
from .core import (Rado, RadoSet, all_signatures, compute_rado, compute_rados,
                   enumerate_all_rados, fixed_support_rados, mean_operator,
                   sample_fixed_support_signatures, sample_uniform_signatures, uniform_rados)
from .dataset import (Dataset, FoldPlan, edge_vector, load_csv, load_haberman,
                      max_abs_scale, save_csv, stratified_folds)
from .errors import (DatasetError, DrawBudgetExceeded, NumericError, RadoError,
                     UnderdeterminedError, WeakLearnerError, ZeroColumnError)
from .experiment import (ExperimentResult, ExperimentSpec, best_iterate, run_cv_experiment,
                         run_noise_sweep)
from .losses import (LinearModel, equivalence_gap, exp_rado_risk, log_exp_rado_risk,
                     logistic_rado_risk, logloss, logloss_gradient, zero_one_error)
from .privacy import (DpAcceptanceInterval, DpFeatureConfig, NoiseConfig, dp_beta,
                      dp_interval, dpfreal, gaussian_noisify, rejection_bound)
from .reconstruction import (ambiguity_witness, build_gm, hausdorff, recover_edges,
                             signatures_to_selection)
