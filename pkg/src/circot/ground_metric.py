"""Per-pair transport costs between bins on an ``N``-bin circle.

The base distance is the arc length ``d(i, j) = min(|i-j|, N - |i-j|)``.
A ground metric is an increasing function ``f`` applied to that distance:

* ``arc``    -- f(d) = d (linear)
* ``power``  -- f(d) = d**rho, rho >= 1 (convex for rho > 1)
* ``huber``  -- f(d) = d**2 below tau, tau*(2d - tau) above (convex)
* ``chord``  -- f(d) = 2r*sin(d / 2r) with r = N/(2*pi): straight-line
  distance between bin positions on a circle of circumference N
  (concave and increasing on [0, N/2])
* ``step``   -- f(d) = 1 for d > 0, 0 at d = 0
* ``custom`` -- an explicit cost matrix, looked up rather than evaluated

Materializing ``f`` over all pairs gives the ground matrix used by the
transport solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import IndexOutOfRange, InvalidMatrix, InvalidParameter


class MetricKind(str, Enum):
    ARC = "arc"
    POWER = "power"
    HUBER = "huber"
    CHORD = "chord"
    STEP = "step"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GroundMetric:
    """A ground-cost function; build instances via the factory methods."""

    kind: MetricKind
    rho: float | None = None
    tau: float | None = None
    chord_bins: int | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind is MetricKind.POWER:
            if self.rho is None or self.rho < 1:
                raise InvalidParameter(f"power exponent must be >= 1, got {self.rho}")
        elif self.kind is MetricKind.HUBER:
            if self.tau is None or self.tau <= 0:
                raise InvalidParameter(f"huber threshold must be > 0, got {self.tau}")
        elif self.kind is MetricKind.CHORD:
            if self.chord_bins is None or self.chord_bins < 2:
                raise InvalidParameter("chord metric needs the bin count N >= 2")
        elif self.kind is MetricKind.CUSTOM:
            m = np.array(self.matrix, dtype=np.float64, copy=True)
            _check_cost_matrix(m)
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)

    @staticmethod
    def arc_length() -> "GroundMetric":
        return GroundMetric(MetricKind.ARC)

    @staticmethod
    def power(rho: float) -> "GroundMetric":
        return GroundMetric(MetricKind.POWER, rho=float(rho))

    @staticmethod
    def huber(tau: float) -> "GroundMetric":
        return GroundMetric(MetricKind.HUBER, tau=float(tau))

    @staticmethod
    def chord(n_bins: int) -> "GroundMetric":
        return GroundMetric(MetricKind.CHORD, chord_bins=int(n_bins))

    @staticmethod
    def step() -> "GroundMetric":
        return GroundMetric(MetricKind.STEP)

    @staticmethod
    def custom(matrix) -> "GroundMetric":
        return GroundMetric(MetricKind.CUSTOM, matrix=np.asarray(matrix))

    @property
    def is_convex(self) -> bool:
        """Whether f is convex in the distance (admits the fast cut search)."""
        return self.kind in (MetricKind.ARC, MetricKind.POWER, MetricKind.HUBER)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroundMetric):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        if self.kind is MetricKind.CUSTOM:
            return bool(np.array_equal(self.matrix, other.matrix))
        return (self.rho, self.tau, self.chord_bins) == (
            other.rho,
            other.tau,
            other.chord_bins,
        )


@dataclass(frozen=True)
class GroundMatrix:
    """Materialized ``N x N`` cost matrix: symmetric, zero diagonal."""

    cost: np.ndarray

    def __post_init__(self):
        m = np.array(self.cost, dtype=np.float64, copy=True)
        _check_cost_matrix(m)
        m.setflags(write=False)
        object.__setattr__(self, "cost", m)

    @property
    def n_bins(self) -> int:
        return int(self.cost.shape[0])

    def max_cost(self) -> float:
        return float(self.cost.max())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroundMatrix)
            and bool(np.array_equal(self.cost, other.cost))
        )


def _check_cost_matrix(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrix(f"cost matrix must be square, got shape {m.shape}")
    if m.shape[0] < 2:
        raise InvalidMatrix("cost matrix needs at least 2 bins")
    if np.any(m < 0):
        raise InvalidMatrix("cost matrix has negative entries")
    if np.any(np.diag(m) != 0):
        raise InvalidMatrix("cost matrix diagonal must be zero")
    if not np.array_equal(m, m.T):
        raise InvalidMatrix("cost matrix must be symmetric")


def arc_length(i: int, j: int, n: int) -> int:
    """Shortest circular distance between bins ``i`` and ``j`` of ``n``."""
    if not (0 <= i < n):
        raise IndexOutOfRange(i, n)
    if not (0 <= j < n):
        raise IndexOutOfRange(j, n)
    d = abs(i - j)
    return min(d, n - d)


def arc_length_matrix(n: int) -> np.ndarray:
    """All pairwise arc lengths as an ``n x n`` float array (circulant)."""
    idx = np.arange(n)
    d = np.abs(idx[:, None] - idx[None, :]).astype(np.float64)
    return np.minimum(d, n - d)


def arc_lengths_to(j_star: int, n: int) -> np.ndarray:
    """Arc lengths from every bin to ``j_star``."""
    if not (0 <= j_star < n):
        raise IndexOutOfRange(j_star, n)
    d = np.abs(np.arange(n, dtype=np.float64) - j_star)
    return np.minimum(d, n - d)


def eval_cost(spec: GroundMetric, d):
    """Apply the cost function of ``spec`` to distance(s) ``d``.

    ``d`` may be a scalar or an array; the result matches its shape.
    Custom metrics carry no function and reject evaluation.
    """
    darr = np.asarray(d, dtype=np.float64)
    if np.any(darr < 0):
        raise InvalidParameter("distances must be nonnegative")
    kind = spec.kind
    if kind is MetricKind.ARC:
        out = darr.copy()
    elif kind is MetricKind.POWER:
        out = darr**spec.rho
    elif kind is MetricKind.HUBER:
        tau = spec.tau
        out = np.where(darr <= tau, darr**2, tau * (2.0 * darr - tau))
    elif kind is MetricKind.CHORD:
        half = spec.chord_bins / 2.0
        if np.any(darr > half + 1e-9):
            raise InvalidParameter(
                f"chord metric is defined for distances in [0, {half}]"
            )
        r = spec.chord_bins / (2.0 * math.pi)
        out = 2.0 * r * np.sin(darr / (2.0 * r))
    elif kind is MetricKind.STEP:
        out = (darr > 0).astype(np.float64)
    else:
        raise InvalidParameter("custom metrics support matrix lookup only")
    if np.isscalar(d) or np.ndim(d) == 0:
        return float(out)
    return out


def build_ground_matrix(spec: GroundMetric, n: int) -> GroundMatrix:
    """Materialize ``cost[i, j] = f(arc_length(i, j, n))`` for ``spec``.

    For custom specs the stored matrix is returned (its size must be
    ``n``).  The result is circulant for every evaluated kind: each row is
    a rotation of the first.
    """
    if n < 2:
        raise InvalidParameter(f"need at least 2 bins, got {n}")
    if spec.kind is MetricKind.CUSTOM:
        if spec.matrix.shape[0] != n:
            raise InvalidMatrix(
                f"custom matrix is {spec.matrix.shape[0]}x{spec.matrix.shape[0]}, "
                f"expected {n}x{n}"
            )
        return GroundMatrix(spec.matrix)
    if spec.kind is MetricKind.CHORD and spec.chord_bins != n:
        raise InvalidParameter(
            f"chord metric was built for N={spec.chord_bins}, asked for N={n}"
        )
    return GroundMatrix(eval_cost(spec, arc_length_matrix(n)))


def is_metric(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    """Check the metric axioms on an explicit cost matrix.

    Symmetry and the zero diagonal are structural requirements already;
    this adds identity of indiscernibles (off-diagonal entries strictly
    positive) and the triangle inequality over all triples.  Learned cost
    matrices need not pass; call this only when a true metric is required.
    """
    m = np.asarray(matrix, dtype=np.float64)
    _check_cost_matrix(m)
    n = m.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(m[off] <= 0):
        return False
    # d(i,k) <= d(i,j) + d(j,k) for all triples, vectorized over j
    via = m[:, :, None] + m[None, :, :]
    return bool(np.all(m <= via.min(axis=1) + atol))


def parse_metric(text: str, n_bins: int | None = None) -> GroundMetric:
    """Parse the flat metric grammar used by the command line.

    Accepted forms: ``arc``, ``power:RHO``, ``huber:TAU``, ``chord``,
    ``step``, ``custom:PATH``.  ``chord`` needs ``n_bins``; ``custom``
    loads an ``N x N`` CSV cost matrix from PATH.
    """
    head, _, arg = text.partition(":")
    head = head.strip().lower()
    if head == "arc":
        return GroundMetric.arc_length()
    if head == "power":
        try:
            return GroundMetric.power(float(arg))
        except ValueError as exc:
            raise InvalidParameter(f"bad power exponent {arg!r}") from exc
    if head == "huber":
        try:
            return GroundMetric.huber(float(arg))
        except ValueError as exc:
            raise InvalidParameter(f"bad huber threshold {arg!r}") from exc
    if head == "chord":
        if n_bins is None:
            raise InvalidParameter("chord metric needs the bin count")
        return GroundMetric.chord(n_bins)
    if head == "step":
        return GroundMetric.step()
    if head == "custom":
        from .io import read_matrix

        return GroundMetric.custom(read_matrix(arg))
    raise InvalidParameter(f"unknown metric spec {text!r}")
