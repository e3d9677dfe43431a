"""Conservative target distributions for ordinal/angular classification.

A plain one-hot target assumes the annotation is exact.  Pose and ordinal
labels are more often wrong by a *small* amount (a neighboring class) than
by a random one, so a more honest target mixes three parts:

* the one-hot target itself, weight ``1 - xi - eta``;
* a unimodal bump wrapped around the circle and centered on the true
  class, weight ``xi`` (inlier near-miss noise);
* the uniform distribution, weight ``eta`` (outlier noise, identical to
  plain label smoothing when ``xi = 0``).

The bump is sampled from a Binomial, Poisson, or discretized Gaussian
over ``K+1`` bins and then placed on the ``N``-bin circle with its mode on
the labeled class.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy import stats

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidParameter,
)
from .histogram import CircularHistogram

_PMF_SUM_TOL = 1e-12
_UNIMODAL_SLACK = 1e-12


class SmoothingFamily(str, Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class UnimodalPMF:
    """A discrete distribution over ``K+1`` bins with a single peak.

    ``probs`` must sum to 1 (within 1e-12) and be nondecreasing up to the
    mode and nonincreasing after it; ties are allowed.  The mode is the
    argmax, lowest index on ties.
    """

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64, copy=True).reshape(-1)
        if arr.size < 1:
            raise InvalidParameter("a PMF needs at least one bin")
        if np.any(arr < 0):
            raise InvalidParameter("PMF entries must be nonnegative")
        if abs(arr.sum() - 1.0) > _PMF_SUM_TOL:
            raise InvalidParameter(
                f"PMF sums to {arr.sum()!r}, expected 1 within {_PMF_SUM_TOL}"
            )
        m = int(np.argmax(arr))
        rising = np.diff(arr[: m + 1])
        falling = np.diff(arr[m:])
        if np.any(rising < -_UNIMODAL_SLACK) or np.any(falling > _UNIMODAL_SLACK):
            raise InvalidParameter("PMF is not unimodal")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def support_size(self) -> int:
        return int(self.probs.size)

    @property
    def mode(self) -> int:
        return int(np.argmax(self.probs))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UnimodalPMF)
            and bool(np.array_equal(self.probs, other.probs))
        )


@dataclass(frozen=True)
class SmoothingSpec:
    """Mixture weights plus the unimodal family and its parameters.

    ``xi`` weights the wrapped unimodal part, ``eta`` the uniform part;
    both are in [0, 1] with ``xi + eta <= 1``.  Exactly one family
    parameter applies: ``p`` for binomial, ``lam`` for poisson, ``sigma2``
    for gaussian.
    """

    xi: float
    eta: float
    family: SmoothingFamily
    k: int
    p: float | None = None
    lam: float | None = None
    sigma2: float | None = None

    def __post_init__(self):
        if self.xi < 0 or self.eta < 0 or self.xi + self.eta > 1:
            raise InvalidParameter(
                f"need xi, eta >= 0 and xi + eta <= 1, got ({self.xi}, {self.eta})"
            )
        if self.k < 0:
            raise InvalidParameter(f"support parameter K must be >= 0, got {self.k}")

    def make_pmf(self) -> UnimodalPMF:
        if self.family is SmoothingFamily.BINOMIAL:
            if self.p is None:
                raise InvalidParameter("binomial smoothing needs p")
            return binomial_pmf(self.k, self.p)
        if self.family is SmoothingFamily.POISSON:
            if self.lam is None:
                raise InvalidParameter("poisson smoothing needs lambda")
            return poisson_pmf(self.k, self.lam)
        if self.sigma2 is None:
            raise InvalidParameter("gaussian smoothing needs sigma2")
        return gaussian_pmf(self.k, self.sigma2)


def one_hot(n: int, j_star: int, peak_mass: float = 1.0) -> CircularHistogram:
    """All mass ``peak_mass`` on bin ``j_star``, zero elsewhere.

    ``peak_mass`` may be slightly below 1 to mirror a softmax total; the
    sum check is waived in that case and keeping the result consistent is
    the caller's concern.
    """
    if not (0 <= j_star < n):
        raise IndexOutOfRange(j_star, n)
    if not (0.0 < peak_mass <= 1.0):
        raise InvalidParameter(f"peak mass must be in (0, 1], got {peak_mass}")
    mass = np.zeros(n)
    mass[j_star] = peak_mass
    return CircularHistogram(mass, sum_tolerance=math.inf)


def binomial_pmf(k: int, p: float) -> UnimodalPMF:
    """Binomial(K, p) over ``K+1`` bins; sums to 1 by construction."""
    if k < 0:
        raise InvalidParameter(f"K must be >= 0, got {k}")
    if not (0.0 < p < 1.0):
        raise InvalidParameter(f"success probability must be in (0, 1), got {p}")
    if k == 0:
        return UnimodalPMF(np.ones(1))
    return UnimodalPMF(stats.binom.pmf(np.arange(k + 1), k, p))


def poisson_pmf(k: int, lam: float) -> UnimodalPMF:
    """Poisson(lambda) truncated to ``0..K`` and renormalized.

    Computed by the multiplicative recurrence p[j] = p[j-1] * lam / j so
    that the tie p[lam-1] == p[lam] at integer lambda is exact in floats.
    """
    if k < 0:
        raise InvalidParameter(f"K must be >= 0, got {k}")
    if lam <= 0:
        raise InvalidParameter(f"lambda must be > 0, got {lam}")
    w = np.empty(k + 1)
    w[0] = 1.0
    for j in range(1, k + 1):
        w[j] = w[j - 1] * (lam / j)
    return UnimodalPMF(w / w.sum())


def gaussian_pmf(k: int, sigma2: float, renorm: str = "softmax") -> UnimodalPMF:
    """Gaussian density sampled at ``0..K`` with mean ``K/2``, then mapped
    to a distribution.

    ``renorm="softmax"`` exponentiates the density values and normalizes
    (the default); ``renorm="plain"`` divides the density values by their
    sum instead.  Softmax of a density is an unusual construction but it
    is the one the rest of the pipeline expects; the plain variant is the
    textbook discretization.
    """
    if k < 0:
        raise InvalidParameter(f"K must be >= 0, got {k}")
    if sigma2 <= 0:
        raise InvalidParameter(f"variance must be > 0, got {sigma2}")
    if renorm not in ("softmax", "plain"):
        raise InvalidParameter(f"renorm must be 'softmax' or 'plain', got {renorm!r}")
    if k == 0:
        return UnimodalPMF(np.ones(1))
    x = np.arange(k + 1, dtype=np.float64)
    mu = k / 2.0
    dens = np.exp(-((x - mu) ** 2) / (2.0 * sigma2)) / math.sqrt(
        2.0 * math.pi * sigma2
    )
    if renorm == "plain":
        return UnimodalPMF(dens / dens.sum())
    z = np.exp(dens - dens.max())
    return UnimodalPMF(z / z.sum())


def wrap_to_circle(pmf: UnimodalPMF, n: int, j_star: int) -> CircularHistogram:
    """Place ``pmf`` on the ``n``-bin circle with its mode on ``j_star``.

    Bin ``k`` of the PMF lands on circle bin ``(j_star + k - mode) mod n``.
    When the support is wider than the circle, overlapping mass
    accumulates; the total is preserved exactly.
    """
    if not (0 <= j_star < n):
        raise IndexOutOfRange(j_star, n)
    out = np.zeros(n)
    offsets = (j_star + np.arange(pmf.support_size) - pmf.mode) % n
    np.add.at(out, offsets, pmf.probs)
    return CircularHistogram(out, sum_tolerance=math.inf)


def conservative_target(
    t: CircularHistogram,
    wrapped: CircularHistogram,
    xi: float,
    eta: float,
) -> CircularHistogram:
    """Mix ``(1 - xi - eta) * t + xi * wrapped + eta / N`` per bin.

    With ``xi = eta = 0`` this returns ``t`` unchanged; with ``xi = 0,
    eta = 1`` it is the uniform distribution (pure label smoothing).
    """
    if xi < 0 or eta < 0 or xi + eta > 1:
        raise InvalidParameter(
            f"need xi, eta >= 0 and xi + eta <= 1, got ({xi}, {eta})"
        )
    if t.n_bins != wrapped.n_bins:
        raise DimensionMismatch(t.n_bins, wrapped.n_bins)
    n = t.n_bins
    mix = (1.0 - xi - eta) * t.mass + xi * wrapped.mass + eta / n
    return CircularHistogram(mix)


def smooth_one_hot(
    n: int, j_star: int, spec: SmoothingSpec
) -> CircularHistogram:
    """One-hot at ``j_star`` blended with the wrapped bump and uniform floor."""
    pmf = spec.make_pmf()
    return conservative_target(
        one_hot(n, j_star),
        wrap_to_circle(pmf, n, j_star),
        spec.xi,
        spec.eta,
    )
