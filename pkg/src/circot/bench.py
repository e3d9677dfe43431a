"""Per-call timing of the solvers over a range of histogram sizes."""

from __future__ import annotations

from dataclasses import dataclass
import timeit

import numpy as np

from .errors import InvalidParameter
from .ground_metric import GroundMetric, MetricKind, build_ground_matrix
from .histogram import CircularHistogram, normalize
from .oracle import sinkhorn
from .solvers import circular_convex, circular_linear, l1_step

SINKHORN_MAX_BINS = 4096


@dataclass(frozen=True)
class BenchRow:
    n: int
    solver: str
    mean_ns: float


def random_instance(
    n: int, rng: np.random.Generator
) -> tuple[CircularHistogram, CircularHistogram]:
    """A pair of dense random histograms of size ``n``."""
    return (
        normalize(rng.random(n) + 1e-12),
        normalize(rng.random(n) + 1e-12),
    )


def _fast_timer(spec: GroundMetric, s, t):
    kind = spec.kind
    if kind is MetricKind.ARC:
        return "circular_linear", lambda: circular_linear(s, t)
    if kind in (MetricKind.POWER, MetricKind.HUBER):
        return "circular_convex", lambda: circular_convex(s, t, spec)
    if kind is MetricKind.STEP:
        return "l1_step", lambda: l1_step(s, t)
    raise InvalidParameter(
        f"no fast circular solver to time for {kind.value!r}"
    )


def time_ns(fn, reps: int) -> float:
    """Mean wall-clock nanoseconds per call over ``reps`` timed calls."""
    fn()  # warm caches and lazy allocations outside the timed region
    total = timeit.timeit(fn, number=reps)
    return total / reps * 1e9


def run_bench(
    metric: str | GroundMetric = "arc",
    sizes: list[int] | None = None,
    seed: int = 42,
    reps: int | None = None,
    include_sinkhorn: bool = False,
) -> list[BenchRow]:
    """Time the dispatched fast solver (and optionally Sinkhorn) per size.

    ``reps`` defaults to an adaptive count targeting tens of milliseconds
    of measurement per size, so small instances are averaged over many
    calls.  One deterministic instance is drawn per size from ``seed``.
    """
    from .ground_metric import parse_metric

    if sizes is None:
        sizes = [2**k for k in range(10, 21)]
    rows: list[BenchRow] = []
    for n in sizes:
        spec = metric if isinstance(metric, GroundMetric) else parse_metric(metric, n)
        rng = np.random.default_rng([seed, n])
        s, t = random_instance(n, rng)
        name, fn = _fast_timer(spec, s, t)
        if reps is None:
            once = time_ns(fn, 1)
            n_reps = int(np.clip(5e7 / max(once, 1.0), 5, 1000))
        else:
            n_reps = reps
        rows.append(BenchRow(n, name, time_ns(fn, n_reps)))
        if include_sinkhorn:
            if n > SINKHORN_MAX_BINS:
                raise InvalidParameter(
                    f"sinkhorn timing capped at {SINKHORN_MAX_BINS} bins, got {n}"
                )
            d = build_ground_matrix(spec, n)
            sink = lambda: sinkhorn(s, t, d)  # noqa: E731
            rows.append(BenchRow(n, "sinkhorn", time_ns(sink, max(1, (reps or 3) // 3))))
    return rows
