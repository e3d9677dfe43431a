"""Command-line front end.

Subcommands::

    dist          loss between two histogram files
    smooth        emit a conservative (one-hot / unimodal / uniform) target
    groundmatrix  materialize an N x N ground cost matrix
    verify        randomized oracle-equivalence suites
    bench         per-call solver timings as CSV
    adapt         blend empirical class distances with the geometric costs

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data or
validation error.  Diagnostics go to stderr; all numeric output uses 12
significant digits.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .adaptive import (
    ClassFeatureSet,
    blend_ground_matrix,
    centroid_l1_distances,
    class_centroids,
    l2_normalize,
)
from .bench import run_bench
from .errors import CircotError
from .ground_metric import MetricKind, build_ground_matrix, parse_metric
from .histogram import validate_histogram
from .oracle import line_ground_matrix, mincost_exact
from .smoothing import SmoothingFamily, SmoothingSpec, smooth_one_hot
from .solvers import (
    LossResult,
    circular_convex,
    circular_linear,
    l1_step,
    line_ot,
)
from .verification import run_all_suites


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circot",
        description="Wasserstein losses between histograms on a circle or line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="loss between two histogram files")
    p_dist.add_argument("--metric", required=True,
                        help="arc | power:RHO | huber:TAU | chord | step | custom:PATH")
    p_dist.add_argument("--geometry", choices=("circle", "line"), default="circle")
    p_dist.add_argument("--resolution", type=int, default=10**6,
                        help="cut-search resolution for convex costs")
    p_dist.add_argument("a", help="first histogram (CSV or JSON)")
    p_dist.add_argument("b", help="second histogram (CSV or JSON)")

    p_smooth = sub.add_parser("smooth", help="emit a conservative target")
    p_smooth.add_argument("--n", type=int, required=True, help="number of classes")
    p_smooth.add_argument("--jstar", type=int, required=True, help="true class index")
    p_smooth.add_argument("--dist", dest="family", required=True,
                          choices=[f.value for f in SmoothingFamily])
    p_smooth.add_argument("--K", type=int, required=True, dest="k",
                          help="unimodal support is K+1 bins")
    p_smooth.add_argument("--p", type=float, help="binomial success probability")
    p_smooth.add_argument("--lambda", type=float, dest="lam", help="poisson rate")
    p_smooth.add_argument("--sigma2", type=float, help="gaussian variance")
    p_smooth.add_argument("--xi", type=float, default=0.0, help="unimodal weight")
    p_smooth.add_argument("--eta", type=float, default=0.0, help="uniform weight")
    p_smooth.add_argument("--out", help="output path (stdout when omitted)")

    p_gm = sub.add_parser("groundmatrix", help="materialize a ground matrix")
    p_gm.add_argument("--metric", required=True)
    p_gm.add_argument("--n", type=int, required=True)
    p_gm.add_argument("--geometry", choices=("circle", "line"), default="circle")
    p_gm.add_argument("--out", help="output path (stdout when omitted)")

    p_verify = sub.add_parser("verify", help="randomized oracle-equivalence suites")
    p_verify.add_argument("--trials", type=int, default=200,
                          help="trials per histogram size per suite")
    p_verify.add_argument("--max-n", type=int, default=16)
    p_verify.add_argument("--seed", type=int, default=42)

    p_bench = sub.add_parser("bench", help="per-call timings as CSV")
    p_bench.add_argument("--metric", default="arc")
    p_bench.add_argument("--sizes", default=",".join(str(2**k) for k in range(10, 21)),
                         help="comma-separated histogram sizes")
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--reps", type=int, help="timed calls per size (adaptive default)")
    p_bench.add_argument("--with-sinkhorn", action="store_true",
                         help="also time the entropic baseline (small sizes only)")

    p_adapt = sub.add_parser("adapt", help="blend class-feature distances with geometry")
    p_adapt.add_argument("--features", required=True,
                         help="CSV rows: class_index, v_0, ..., v_{dim-1}")
    p_adapt.add_argument("--spec", required=True, dest="metric",
                         help="cost function applied to both distance matrices")
    p_adapt.add_argument("--alpha", type=float, required=True,
                         help="blend coefficient (weight of the geometric term)")
    p_adapt.add_argument("--n", type=int,
                         help="number of classes (default: max label + 1)")
    p_adapt.add_argument("--l2-normalize", action="store_true",
                         help="scale feature vectors to unit norm first")
    p_adapt.add_argument("--out", help="output path (stdout when omitted)")

    return parser


def _cmd_dist(args) -> int:
    a = validate_histogram(io.read_histogram_values(args.a))
    b = validate_histogram(io.read_histogram_values(args.b))
    spec = parse_metric(args.metric, a.n_bins)
    if args.geometry == "line":
        result = line_ot(a, b, spec)
    elif spec.kind is MetricKind.ARC:
        result = circular_linear(a, b)
    elif spec.kind in (MetricKind.POWER, MetricKind.HUBER):
        result = circular_convex(a, b, spec, args.resolution)
    elif spec.kind is MetricKind.STEP:
        result = l1_step(a, b)
    else:
        d = build_ground_matrix(spec, a.n_bins)
        plan = mincost_exact(a, b, d, args.resolution)
        result = LossResult(plan.cost)
    print(io.format_float(result.value))
    if result.shift is not None:
        print(io.format_float(result.shift))
    return 0


def _cmd_smooth(args) -> int:
    spec = SmoothingSpec(
        xi=args.xi,
        eta=args.eta,
        family=SmoothingFamily(args.family),
        k=args.k,
        p=args.p,
        lam=args.lam,
        sigma2=args.sigma2,
    )
    target = smooth_one_hot(args.n, args.jstar, spec)
    text = io.write_histogram_values(args.out, target.mass)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _cmd_groundmatrix(args) -> int:
    spec = parse_metric(args.metric, args.n)
    if args.geometry == "line":
        matrix = line_ground_matrix(spec, args.n)
    else:
        matrix = build_ground_matrix(spec, args.n)
    text = io.write_matrix(args.out, matrix.cost)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    results = run_all_suites(args.trials, args.max_n, args.seed)
    ok = True
    for res in results:
        print(res.summary())
        ok = ok and res.passed
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    rows = run_bench(
        metric=args.metric,
        sizes=sizes,
        seed=args.seed,
        reps=args.reps,
        include_sinkhorn=args.with_sinkhorn,
    )
    print("n,solver,mean_ns")
    for row in rows:
        print(f"{row.n},{row.solver},{io.format_float(row.mean_ns)}")
    return 0


def _cmd_adapt(args) -> int:
    labels, vectors = io.read_feature_rows(args.features)
    fs = ClassFeatureSet.from_rows(labels, vectors, args.n)
    if args.l2_normalize:
        fs = l2_normalize(fs)
    d_bar = centroid_l1_distances(class_centroids(fs))
    spec = parse_metric(args.metric, fs.n_classes)
    blended = blend_ground_matrix(d_bar, fs.n_classes, spec, args.alpha)
    text = io.write_matrix(args.out, blended.cost)
    if args.out is None:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "dist": _cmd_dist,
    "smooth": _cmd_smooth,
    "groundmatrix": _cmd_groundmatrix,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "adapt": _cmd_adapt,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CircotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
