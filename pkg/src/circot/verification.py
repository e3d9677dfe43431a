"""Randomized equivalence suites: fast solvers against the flow oracle.

Each suite draws histograms with masses on a coarse grid (multiples of
``1/mass_grid``), so the oracle solves the instance exactly with
``quantization = mass_grid`` and any gap is attributable to the fast
solver.  Suites are deterministic given the seed: every trial derives its
own generator from ``(seed, suite, n, trial)``, so results do not depend
on execution order and trials can run on a worker pool.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import os
import zlib

import numpy as np

from .ground_metric import GroundMetric, build_ground_matrix
from .histogram import CircularHistogram, validate_histogram
from .oracle import mincost_exact
from .solvers import circular_convex, circular_linear, l1_step

WORKERS_ENV = "CIRCOT_WORKERS"


@dataclass
class SuiteResult:
    """Outcome of one randomized suite."""

    name: str
    trials: int
    max_gap: float
    tolerance_note: str
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (
            f"{status} {self.name}: {self.trials} trials, "
            f"max gap {self.max_gap:.3e} (tolerance {self.tolerance_note})"
        )
        if self.failures:
            line += f"; {len(self.failures)} failure(s), first: {self.failures[0]}"
        return line


def random_grid_histogram(
    rng: np.random.Generator, n: int, mass_grid: int = 100
) -> CircularHistogram:
    """Histogram with masses that are multiples of ``1/mass_grid``."""
    counts = rng.multinomial(mass_grid, np.full(n, 1.0 / n))
    return validate_histogram(counts / mass_grid)


def _trial_rng(seed: int, suite: str, n: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(suite.encode()), n, trial])


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_trials(trial_fn, tasks):
    workers = _worker_count()
    if workers == 1:
        return [trial_fn(*t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: trial_fn(*t), tasks))


def linear_suite(
    trials_per_n: int = 200,
    max_n: int = 16,
    seed: int = 42,
    mass_grid: int = 100,
    tolerance: float = 1e-9,
) -> SuiteResult:
    """Median-formula circular distance vs the exact flow oracle."""
    matrices = {
        n: build_ground_matrix(GroundMetric.arc_length(), n)
        for n in range(2, max_n + 1)
    }

    def trial(n: int, k: int):
        rng = _trial_rng(seed, "linear", n, k)
        s = random_grid_histogram(rng, n, mass_grid)
        t = random_grid_histogram(rng, n, mass_grid)
        fast = circular_linear(s, t).value
        exact = mincost_exact(s, t, matrices[n], mass_grid).cost
        return n, k, abs(fast - exact)

    tasks = [(n, k) for n in range(2, max_n + 1) for k in range(trials_per_n)]
    results = _run_trials(trial, tasks)
    gaps = [g for _, _, g in results]
    failures = [
        f"n={n} trial={k} gap={g:.3e}" for n, k, g in results if g > tolerance
    ]
    return SuiteResult(
        "linear vs oracle",
        len(results),
        max(gaps),
        f"{tolerance:.0e}",
        failures,
    )


def convex_suite(
    trials_per_n: int = 200,
    max_n: int = 16,
    seed: int = 42,
    mass_grid: int = 100,
    specs: list[GroundMetric] | None = None,
    m_resolution: int = 10**6,
) -> SuiteResult:
    """Cut-search solver vs the oracle for convex ground costs.

    The allowed gap per instance is ``f(floor(N/2)) * 4 / m_resolution``,
    the value slack of a cut search at resolution ``1/m_resolution``.
    """
    from .ground_metric import eval_cost

    if specs is None:
        specs = [
            GroundMetric.power(2),
            GroundMetric.power(3),
            GroundMetric.huber(1),
            GroundMetric.huber(2),
            GroundMetric.huber(5),
        ]

    def trial(si: int, n: int, k: int):
        spec = specs[si]
        rng = _trial_rng(seed, f"convex-{si}", n, k)
        s = random_grid_histogram(rng, n, mass_grid)
        t = random_grid_histogram(rng, n, mass_grid)
        d = build_ground_matrix(spec, n)
        fast = circular_convex(s, t, spec, m_resolution).value
        exact = mincost_exact(s, t, d, mass_grid).cost
        allowed = eval_cost(spec, float(n // 2)) * 4.0 / m_resolution
        gap = abs(fast - exact)
        return si, n, k, gap, allowed

    tasks = [
        (si, n, k)
        for si in range(len(specs))
        for n in range(2, max_n + 1)
        for k in range(trials_per_n)
    ]
    results = _run_trials(trial, tasks)
    failures = [
        f"spec={specs[si].kind.value} n={n} trial={k} gap={g:.3e} allowed={a:.3e}"
        for si, n, k, g, a in results
        if g > a
    ]
    return SuiteResult(
        "convex vs oracle",
        len(results),
        max(g for _, _, _, g, _ in results),
        f"f(N//2)*4/{m_resolution:.0e}",
        failures,
    )


def step_suite(
    trials_per_n: int = 200,
    max_n: int = 16,
    seed: int = 42,
    mass_grid: int = 100,
    tolerance: float = 1e-9,
) -> SuiteResult:
    """Half-l1 closed form vs the oracle under the step ground cost."""
    matrices = {
        n: build_ground_matrix(GroundMetric.step(), n)
        for n in range(2, max_n + 1)
    }

    def trial(n: int, k: int):
        rng = _trial_rng(seed, "step", n, k)
        s = random_grid_histogram(rng, n, mass_grid)
        t = random_grid_histogram(rng, n, mass_grid)
        fast = l1_step(s, t).value
        exact = mincost_exact(s, t, matrices[n], mass_grid).cost
        return n, k, abs(fast - exact)

    tasks = [(n, k) for n in range(2, max_n + 1) for k in range(trials_per_n)]
    results = _run_trials(trial, tasks)
    gaps = [g for _, _, g in results]
    failures = [
        f"n={n} trial={k} gap={g:.3e}" for n, k, g in results if g > tolerance
    ]
    return SuiteResult(
        "step vs oracle",
        len(results),
        max(gaps),
        f"{tolerance:.0e}",
        failures,
    )


def run_all_suites(
    trials_per_n: int = 200, max_n: int = 16, seed: int = 42
) -> list[SuiteResult]:
    """Run every oracle-equivalence suite with shared settings."""
    return [
        linear_suite(trials_per_n, max_n, seed),
        convex_suite(trials_per_n, max_n, seed),
        step_suite(trials_per_n, max_n, seed),
    ]
