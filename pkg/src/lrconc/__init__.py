"""Concentration function of two populations via their likelihood ratio,
with the optimal ROC curve, AUC and generalized Gini derived from it."""

from .conc import (
    ConcentrationCurve,
    CurveSummary,
    RocCurve,
    auc,
    auc_from_phi,
    classify,
    concentration,
    gini_gen,
    lorenz_curve,
    roc_opt,
    shape_diagnostics,
    summarize,
    tpr_fpr,
)
from .dist import Exponential, Gamma, Normal, length_biased
from .empirical import ScoreSample, empirical_cdf, empirical_concentration, mann_whitney_auc
from .lrdist import (
    Backend,
    DistributionPair,
    LrDistribution,
    Population,
    build_lr_distribution,
    likelihood_ratio,
    lr_quantile,
)

__version__ = "0.1.0"
