"""ROC curves, AUC, Kullback-Leibler distances and dinegentropy for diagnostic tests."""

from .distributions import (
    Beta,
    ContinuousDistribution,
    Exponential,
    Normal,
    PowerRoot,
    Uniform01,
    parse_distribution,
)
from .errors import (
    DisagreementError,
    DomainError,
    EmptyClass,
    MalformedRow,
    NonConvergenceWarning,
    NonFiniteIntegrand,
    ParseError,
    RocdinError,
    TooFewPoints,
    UnknownLabel,
    Unsupported,
    UsageError,
    ZeroDenominator,
)
from .ingest import (
    GaussianKde,
    ScoreDataset,
    empirical_auc,
    empirical_roc,
    kde_density,
    parse_scores,
    rank_auc,
    silverman_bandwidth,
)
from .metrics import (
    ComparisonVerdict,
    DinegentropyResult,
    Estimate,
    MetricsReport,
    Rationale,
    Winner,
    a_star,
    auc,
    compare,
    dinegentropy,
    dinegentropy_of_roc,
    gini,
    kl_divergence,
    metrics_report,
    report_from_json,
    report_to_json,
    density_difference_integral,
)
from .quadrature import DEFAULT_CONFIG, IntegralResult, QuadratureConfig, integrate
from .roc import (
    DirectCdfRoc,
    DominanceCheck,
    EmpiricalRoc,
    ParametricRoc,
    RocCurve,
    ThresholdPoint,
    check_dominance,
    crossings,
    diagonal,
    likelihood_ratio,
    reflected_roc_value,
    roc_value,
    threshold_grid,
    threshold_point,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
