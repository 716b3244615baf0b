"""Label differential privacy: mechanisms, estimators, audits, experiments.

The package covers the three deployment models for private labels (local
randomization, central label DP, full DP), nonparametric estimators tuned by
closed-form schedules, exhaustive privacy audits on enumerable instances, and
a Monte Carlo harness that recovers minimax convergence-rate exponents from
synthetic sweeps.
"""

from .core import (
    INFINITE,
    AssumptionParams,
    CubePartition,
    Dataset,
    LabeledSample,
    PrivacyBudget,
    cell_center,
    cube_index,
    cube_indices,
    make_partition,
)
from .estimators import (
    CubeClassifier,
    CubeRegressor,
    KnnRegressor,
    clip_radius_central,
    clip_radius_local,
    exp_classifier_model_distribution,
    fit_central_cube_regressor,
    fit_central_exp_classifier,
    fit_knn_regressor,
    fit_local_cube_classifier,
    h_central_cls,
    h_central_reg,
    h_local_cls,
    k_local_reg,
    occupancy_floor,
    predict_cube,
)
from .harness import (
    ExperimentConfig,
    DistributionSpec,
    RateFit,
    TrialRecord,
    fit_rate,
    load_config,
    run_experiment,
    theoretical_exponent,
    write_records,
)
from .mechanisms import (
    audit_cdp_exhaustive,
    audit_ldp_discrete,
    derive_rng,
    derive_seed,
    kbit_output_distribution,
    laplace_noise,
    privatize_clip_laplace,
    privatize_kbit,
    privatize_laplace,
    privatize_rr,
    rr_output_distribution,
)
from .risk import (
    RiskReport,
    clip_bias_bound,
    excess_risk_classifier,
    excess_risk_regressor,
)
from .synthdata import (
    BoundedNoise,
    BumpConfig,
    Distribution,
    HeavyTailNoise,
    bayes_risk,
    bump_classification,
    sample_dataset,
    smooth_classification,
    smooth_regression,
)

__version__ = "0.1.0"
