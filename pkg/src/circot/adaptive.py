"""Data-driven ground matrices blended with the geometric one.

When per-class feature vectors are available (e.g. penultimate-layer
activations collected during training), their centroid-to-centroid l1
distances give an empirical notion of how far apart two classes are.
Using that alone can collapse the cost structure, so the empirical matrix
is blended with the geometric arc-length costs under a coefficient that
starts high (trust geometry) and decays to zero (trust the data) over the
course of training.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyClass,
    InvalidMatrix,
    InvalidParameter,
    RoundOutOfRange,
)
from .ground_metric import (
    GroundMatrix,
    GroundMetric,
    MetricKind,
    arc_length_matrix,
    eval_cost,
)


@dataclass(frozen=True)
class ClassFeatureSet:
    """Feature vectors grouped by class: ``features[c]`` is ``(k_c, dim)``.

    Vectors are taken as already normalized by the caller; apply
    :func:`l2_normalize` first when unit-norm rows are wanted.
    """

    features: tuple[np.ndarray, ...]

    def __init__(self, features):
        arrays = []
        dim = None
        for block in features:
            arr = np.asarray(block, dtype=np.float64)
            if arr.size == 0:
                arr = np.zeros((0, 0))
            else:
                arr = np.atleast_2d(arr)
                if dim is None:
                    dim = arr.shape[1]
                elif arr.shape[1] != dim:
                    raise DimensionMismatch(arr.shape[1], dim, "feature dims")
            arr = np.array(arr, copy=True)
            arr.setflags(write=False)
            arrays.append(arr)
        if len(arrays) < 2:
            raise InvalidParameter("need at least 2 classes")
        object.__setattr__(self, "features", tuple(arrays))

    @property
    def n_classes(self) -> int:
        return len(self.features)

    @property
    def dim(self) -> int:
        for arr in self.features:
            if arr.size:
                return int(arr.shape[1])
        return 0

    @staticmethod
    def from_rows(labels, vectors, n_classes: int | None = None) -> "ClassFeatureSet":
        """Group ``(label, vector)`` rows into per-class blocks."""
        labels = np.asarray(labels, dtype=np.int64)
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
        if labels.size != vectors.shape[0]:
            raise DimensionMismatch(labels.size, vectors.shape[0], "rows")
        if n_classes is None:
            n_classes = int(labels.max()) + 1 if labels.size else 0
        if np.any(labels < 0) or np.any(labels >= n_classes):
            raise InvalidParameter("class labels outside [0, n_classes)")
        blocks = [vectors[labels == c] for c in range(n_classes)]
        return ClassFeatureSet(blocks)


def l2_normalize(fs: ClassFeatureSet) -> ClassFeatureSet:
    """Scale every feature vector to unit l2 norm (zero rows left as-is)."""
    blocks = []
    for arr in fs.features:
        norms = np.linalg.norm(arr, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        blocks.append(arr / norms)
    return ClassFeatureSet(blocks)


def class_centroids(fs: ClassFeatureSet) -> np.ndarray:
    """Per-class mean feature vector, shape ``(n_classes, dim)``."""
    rows = []
    for c, arr in enumerate(fs.features):
        if arr.shape[0] == 0:
            raise EmptyClass(c)
        rows.append(arr.mean(axis=0))
    return np.vstack(rows)


def centroid_l1_distances(centroids: np.ndarray) -> np.ndarray:
    """Pairwise l1 distances between centroid rows (symmetric, zero diagonal)."""
    c = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    return np.abs(c[:, None, :] - c[None, :, :]).sum(axis=2)


def blend_ground_matrix(
    d_bar: np.ndarray,
    n: int,
    spec: GroundMetric,
    alpha_blend: float,
) -> GroundMatrix:
    """Mix empirical and geometric costs: ``(f(d_bar) + a*f(d)) / (1 + a)``.

    ``d_bar`` is the empirical inter-class distance matrix, ``d`` the arc
    length on the circle, and ``a = alpha_blend >= 0``.  With a large
    coefficient the geometric term dominates; at zero only the empirical
    distances remain.  The chord cost is rejected because empirical
    distances may exceed its half-circumference domain.
    """
    if alpha_blend < 0:
        raise InvalidParameter(f"blend coefficient must be >= 0, got {alpha_blend}")
    if spec.kind is MetricKind.CUSTOM:
        raise InvalidParameter("blending needs an evaluable cost function")
    if spec.kind is MetricKind.CHORD:
        raise InvalidParameter(
            "chord cost is only defined up to half the circumference; "
            "empirical distances may exceed it"
        )
    m = np.asarray(d_bar, dtype=np.float64)
    if m.ndim != 2 or m.shape != (n, n):
        raise InvalidMatrix(f"expected a {n}x{n} matrix, got shape {m.shape}")
    if np.any(m < 0):
        raise InvalidMatrix("empirical distances must be nonnegative")
    if np.any(np.diag(m) != 0):
        raise InvalidMatrix("empirical distance diagonal must be zero")
    if not np.array_equal(m, m.T):
        raise InvalidMatrix("empirical distance matrix must be symmetric")
    geo = eval_cost(spec, arc_length_matrix(n))
    emp = eval_cost(spec, m)
    blended = (emp + alpha_blend * geo) / (1.0 + alpha_blend)
    return GroundMatrix(blended)


@dataclass(frozen=True)
class BlendSchedule:
    """Linear decay of the blend coefficient over training rounds."""

    total_rounds: int
    alpha_start: float = 10.0
    alpha_end: float = 0.0

    def __post_init__(self):
        if self.total_rounds < 1:
            raise InvalidParameter(
                f"need at least one round, got {self.total_rounds}"
            )
        if not (self.alpha_start >= self.alpha_end >= 0):
            raise InvalidParameter(
                "need alpha_start >= alpha_end >= 0, got "
                f"({self.alpha_start}, {self.alpha_end})"
            )


def alpha_at(schedule: BlendSchedule, round_index: int) -> float:
    """Blend coefficient for ``round_index``, interpolated linearly.

    Runs from ``alpha_start`` at round 0 down to ``alpha_end`` at the
    last round; monotone nonincreasing in between.
    """
    r = int(round_index)
    total = schedule.total_rounds
    if not (0 <= r < total):
        raise RoundOutOfRange(r, total)
    if total == 1:
        return float(schedule.alpha_start)
    frac = r / (total - 1)
    return float(schedule.alpha_start + (schedule.alpha_end - schedule.alpha_start) * frac)
