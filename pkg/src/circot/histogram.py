"""Discrete probability distributions on a circle (or ordered line) of bins.

The package works with histograms: ``N`` nonnegative masses attached to the
integer positions ``0..N-1``.  On the circle, position ``N-1`` is adjacent
to position ``0``.  Masses are kept exactly as supplied; nothing here
renormalizes silently, because softmax outputs sum to 1 only up to their
printed precision and downstream losses must see the raw values.

All containers are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    BadSum,
    NegativeMass,
    OutOfRange,
    TooFewBins,
    ZeroTotalMass,
)

DEFAULT_SUM_TOLERANCE = 1e-6
_PSEUDO_INVERSE_SLACK = 1e-12


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CircularHistogram:
    """``N`` nonnegative masses summing to 1 within a tolerance.

    Parameters
    ----------
    mass : array_like
        The per-bin masses.  Stored as given, never renormalized.
    sum_tolerance : float
        Allowed deviation of ``sum(mass)`` from 1.  Pass ``math.inf`` to
        skip the sum check (used for deliberately sub-unit one-hot
        targets); nonnegativity and the minimum bin count are always
        enforced.
    """

    mass: np.ndarray
    sum_tolerance: float = DEFAULT_SUM_TOLERANCE

    def __post_init__(self):
        arr = _as_readonly(self.mass)
        if arr.size < 2:
            raise TooFewBins(arr.size)
        negative = np.flatnonzero(arr < 0)
        if negative.size:
            i = int(negative[0])
            raise NegativeMass(i, float(arr[i]))
        total = float(arr.sum())
        tol = self.sum_tolerance
        if not math.isinf(tol) and abs(total - 1.0) > tol:
            raise BadSum(total, tol)
        object.__setattr__(self, "mass", arr)

    @property
    def n_bins(self) -> int:
        return int(self.mass.size)

    def total(self) -> float:
        return float(self.mass.sum())

    def __len__(self) -> int:
        return self.n_bins

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CircularHistogram)
            and bool(np.array_equal(self.mass, other.mass))
        )


@dataclass(frozen=True)
class CumulativeDistribution:
    """Running mass totals ``cum[i] = mass[0] + ... + mass[i]``.

    The last entry is the total mass (~1).  For circular constructions the
    distribution extends periodically: one full turn adds one unit of
    mass, i.e. ``value_at(i + N) = value_at(i) + 1``.
    """

    cum: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cum", _as_readonly(self.cum))

    @property
    def n_bins(self) -> int:
        return int(self.cum.size)

    def value_at(self, i: int) -> float:
        """Cumulative mass at integer position ``i``, periodically extended."""
        n = self.n_bins
        turns, r = divmod(int(i), n)
        return float(self.cum[r]) + turns

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CumulativeDistribution)
            and bool(np.array_equal(self.cum, other.cum))
        )


def validate_histogram(
    values, tolerance: float = DEFAULT_SUM_TOLERANCE
) -> CircularHistogram:
    """Check nonnegativity, bin count and total mass; wrap into a histogram.

    The masses are stored exactly as given.  Raises
    :class:`~circot.errors.NegativeMass`, :class:`~circot.errors.BadSum`
    or :class:`~circot.errors.TooFewBins` on violation.
    """
    return CircularHistogram(values, sum_tolerance=tolerance)


def normalize(values) -> CircularHistogram:
    """Divide nonnegative masses by their sum so they total exactly 1.

    Raises :class:`~circot.errors.ZeroTotalMass` when every entry is zero
    and :class:`~circot.errors.NegativeMass` on any negative entry.
    """
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    negative = np.flatnonzero(arr < 0)
    if negative.size:
        i = int(negative[0])
        raise NegativeMass(i, float(arr[i]))
    total = arr.sum()
    if total <= 0:
        raise ZeroTotalMass("cannot normalize a zero-mass vector")
    return CircularHistogram(arr / total, sum_tolerance=1e-12)


def cumulative(h: CircularHistogram) -> CumulativeDistribution:
    """Cumulative distribution of ``h``: ``cum[i] = sum(mass[:i+1])``."""
    return CumulativeDistribution(np.cumsum(h.mass))


def pseudo_inverse(c: CumulativeDistribution, m: float) -> int:
    """Smallest bin index at which the cumulative mass reaches level ``m``.

    This is the quantile function of a discrete distribution: the returned
    index ``i`` is the least one with ``cum[i] >= m`` (up to a 1e-12
    slack).  ``m`` must lie in ``(0, cum[-1]]``, with a small tolerance at
    the top so that querying exactly 1.0 works for histograms whose float
    total falls marginally short.
    """
    total = float(c.cum[-1])
    if not (0.0 < m <= total + DEFAULT_SUM_TOLERANCE):
        raise OutOfRange(m)
    idx = int(np.searchsorted(c.cum, m - _PSEUDO_INVERSE_SLACK, side="left"))
    return min(idx, c.n_bins - 1)


def rotate(h: CircularHistogram, offset: int) -> CircularHistogram:
    """Shift every bin by ``offset`` positions around the circle.

    ``rotate(h, k).mass[(i + k) % N] == h.mass[i]``; total mass is
    unchanged.  Negative offsets rotate the other way.
    """
    return CircularHistogram(
        np.roll(h.mass, int(offset)), sum_tolerance=h.sum_tolerance
    )
