"""Exact Wasserstein losses between discrete distributions on a circle or line.

The public surface, by theme:

histograms
    :class:`CircularHistogram`, :class:`CumulativeDistribution`,
    :func:`validate_histogram`, :func:`normalize`, :func:`cumulative`,
    :func:`pseudo_inverse`, :func:`rotate`
ground costs
    :class:`GroundMetric`, :class:`GroundMatrix`, :func:`arc_length`,
    :func:`eval_cost`, :func:`build_ground_matrix`, :func:`is_metric`
targets
    :func:`one_hot`, :func:`binomial_pmf`, :func:`poisson_pmf`,
    :func:`gaussian_pmf`, :func:`wrap_to_circle`,
    :func:`conservative_target`, :func:`smooth_one_hot`
fast solvers
    :func:`onehot_loss`, :func:`onehot_grad`, :func:`circular_linear`,
    :func:`circular_linear_subgrad`, :func:`line_ot`,
    :func:`circular_convex`, :func:`l1_step`
verification
    :func:`mincost_exact`, :func:`sinkhorn`, :func:`compare`,
    :mod:`circot.verification`, :mod:`circot.bench`
adaptive costs
    :func:`class_centroids`, :func:`centroid_l1_distances`,
    :func:`blend_ground_matrix`, :class:`BlendSchedule`, :func:`alpha_at`
"""

from . import errors
from .adaptive import (
    BlendSchedule,
    ClassFeatureSet,
    alpha_at,
    blend_ground_matrix,
    centroid_l1_distances,
    class_centroids,
    l2_normalize,
)
from .ground_metric import (
    GroundMatrix,
    GroundMetric,
    MetricKind,
    arc_length,
    arc_length_matrix,
    build_ground_matrix,
    eval_cost,
    is_metric,
    parse_metric,
)
from .histogram import (
    CircularHistogram,
    CumulativeDistribution,
    cumulative,
    normalize,
    pseudo_inverse,
    rotate,
    validate_histogram,
)
from .oracle import (
    ComparisonReport,
    TransportPlan,
    compare,
    line_ground_matrix,
    mincost_exact,
    quantize_masses,
    sinkhorn,
)
from .smoothing import (
    SmoothingFamily,
    SmoothingSpec,
    UnimodalPMF,
    binomial_pmf,
    conservative_target,
    gaussian_pmf,
    one_hot,
    poisson_pmf,
    smooth_one_hot,
    wrap_to_circle,
)
from .solvers import (
    LossResult,
    circular_convex,
    circular_linear,
    circular_linear_subgrad,
    l1_step,
    line_ot,
    onehot_grad,
    onehot_loss,
)

__version__ = "0.1.0"

__all__ = [
    "BlendSchedule",
    "CircularHistogram",
    "ClassFeatureSet",
    "ComparisonReport",
    "CumulativeDistribution",
    "GroundMatrix",
    "GroundMetric",
    "LossResult",
    "MetricKind",
    "SmoothingFamily",
    "SmoothingSpec",
    "TransportPlan",
    "UnimodalPMF",
    "alpha_at",
    "arc_length",
    "arc_length_matrix",
    "binomial_pmf",
    "blend_ground_matrix",
    "build_ground_matrix",
    "centroid_l1_distances",
    "circular_convex",
    "circular_linear",
    "circular_linear_subgrad",
    "class_centroids",
    "compare",
    "conservative_target",
    "cumulative",
    "errors",
    "eval_cost",
    "gaussian_pmf",
    "is_metric",
    "l1_step",
    "l2_normalize",
    "line_ground_matrix",
    "line_ot",
    "mincost_exact",
    "normalize",
    "one_hot",
    "onehot_grad",
    "onehot_loss",
    "parse_metric",
    "poisson_pmf",
    "pseudo_inverse",
    "quantize_masses",
    "rotate",
    "sinkhorn",
    "smooth_one_hot",
    "validate_histogram",
    "wrap_to_circle",
]
