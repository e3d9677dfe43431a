"""Exception types raised across the package.

Every exception derives from :class:`CircotError` so callers can catch the
whole family with one clause.  Exceptions carry the offending values as
attributes where that helps diagnostics.
"""

from __future__ import annotations


class CircotError(ValueError):
    """Base class for all validation and computation errors in circot."""


class NegativeMass(CircotError):
    """A histogram entry is negative."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"mass[{index}] = {value!r} is negative")


class BadSum(CircotError):
    """Histogram masses do not sum to 1 within tolerance."""

    def __init__(self, actual_sum: float, tolerance: float):
        self.actual_sum = actual_sum
        self.tolerance = tolerance
        super().__init__(
            f"masses sum to {actual_sum!r}, outside 1 +/- {tolerance!r}"
        )


class TooFewBins(CircotError):
    """Fewer than two bins supplied."""

    def __init__(self, n_bins: int):
        self.n_bins = n_bins
        super().__init__(f"need at least 2 bins, got {n_bins}")


class ZeroTotalMass(CircotError):
    """Normalization of an all-zero vector was requested."""


class OutOfRange(CircotError):
    """A cumulative-mass query level lies outside (0, total]."""

    def __init__(self, m: float):
        self.m = m
        super().__init__(f"mass level {m!r} outside the valid range")


class IndexOutOfRange(CircotError):
    """A bin index lies outside [0, N)."""

    def __init__(self, index: int, n_bins: int):
        self.index = index
        self.n_bins = n_bins
        super().__init__(f"index {index} outside [0, {n_bins})")


class DimensionMismatch(CircotError):
    """Two inputs that must share a size do not."""

    def __init__(self, a: int, b: int, what: str = "lengths"):
        self.a = a
        self.b = b
        super().__init__(f"{what} differ: {a} vs {b}")


class InvalidParameter(CircotError):
    """A numeric or structural parameter violates its precondition."""


class InvalidMatrix(CircotError):
    """A cost matrix fails its structural checks."""


class NonConvexSpec(CircotError):
    """A solver restricted to convex ground costs was given a non-convex one."""


class EmptyClass(CircotError):
    """A feature class holds no vectors, so no centroid exists."""

    def __init__(self, class_index: int):
        self.class_index = class_index
        super().__init__(f"class {class_index} has no feature vectors")


class RoundOutOfRange(CircotError):
    """A schedule was queried outside [0, total_rounds)."""

    def __init__(self, round_index: int, total_rounds: int):
        self.round_index = round_index
        self.total_rounds = total_rounds
        super().__init__(
            f"round {round_index} outside [0, {total_rounds})"
        )


class NumericalUnderflow(CircotError):
    """Scaling iterations produced non-finite values.

    Raised by the entropic solver when the regularization is so small that
    even log-domain updates degenerate.
    """


class QuantizationUnderflow(CircotError):
    """A bin's mass would round to zero units despite exceeding half a unit.

    The quantizer repairs this case via largest-remainder rounding, so the
    exception is reserved for diagnostics and is never raised by the
    shipped code paths.
    """
