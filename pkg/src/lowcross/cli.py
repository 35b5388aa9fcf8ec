"""Command-line surface: instance generators, algorithm runs, evaluation,
benchmarks, and SVG rendering.

Exit codes: 0 success, 1 usage error, 2 malformed data, 3 infeasible run.
Every stochastic subcommand takes --seed (default 0) and is reproducible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .approx import approximate, eps_error
from .bench import (
    disc_vs_random_rows,
    halfspace_dual_shatter_c,
    make_halfspace_instance,
    tradeoff_rows,
)
from .core import AssumptionParams, params_from_dual_shatter
from .discrepancy import Coloring, color_from_matching, discrepancy
from .formats import (
    FormatError,
    approx_to_json,
    coloring_from_json,
    coloring_to_json,
    load_system,
    matching_from_json,
    matching_to_json,
    matching_svg,
    points_from_csv,
    points_to_csv,
    range_to_json,
    ranges_from_json,
    rows_to_csv,
    save_system,
    system_to_json,
)
from .geometry import (
    GeometricSetSystem,
    build_ball_testset,
    build_halfspace_testset,
    gen_points,
    grid_instance,
    POINT_DISTRIBUTIONS,
)
from .matching import InfeasibleSampleError, Matching, build_matching, crossing_number
from .presample import low_disc_color_presampled, matching_presampled

USAGE_ERROR = 1
DATA_ERROR = 2
INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _emit(obj, out_path):
    text = json.dumps(obj) if isinstance(obj, dict) else str(obj)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_floats(text, count, what):
    parts = text.split(",")
    if len(parts) != count:
        raise FormatError(f"{what} needs {count} comma-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise FormatError(f"{what}: {exc}") from exc


def _resolve_params(args, system) -> AssumptionParams:
    if getattr(args, "params", None):
        a, b, gamma = _parse_floats(args.params, 3, "--params")
        return AssumptionParams(a=a, b=b, gamma=gamma)
    if getattr(args, "dual_shatter", None):
        c, d = _parse_floats(args.dual_shatter, 2, "--dual-shatter")
        return params_from_dual_shatter(c, d, system.m)
    raise FormatError("provide either --params a,b,gamma or --dual-shatter c,d")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lowcross", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate points, ranges, grids, or bundled systems")
    gensub = p.add_subparsers(dest="what", required=True)

    g = gensub.add_parser("points")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--dist", default="uniform-box", choices=POINT_DISTRIBUTIONS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)

    g = gensub.add_parser("grid")
    g.add_argument("--n0", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("-o", "--out", required=True)

    g = gensub.add_parser("ranges")
    g.add_argument("--kind", required=True, choices=["halfspace-testset", "ball-testset"])
    g.add_argument("--points", required=True)
    g.add_argument("--t", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)

    g = gensub.add_parser("system")
    g.add_argument("--points", default=None, help="points CSV (bundle mode)")
    g.add_argument("--ranges", default=None, help="range family JSON (bundle mode)")
    g.add_argument("--kind", default=None, choices=["halfspace-testset"],
                   help="one-shot instance instead of bundling")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--dim", type=int, default=None)
    g.add_argument("--t", type=int, default=None)
    g.add_argument("--dist", default="uniform-box", choices=POINT_DISTRIBUTIONS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)

    for name in ("match", "color"):
        q = sub.add_parser(name)
        q.add_argument("system")
        q.add_argument("--params", default=None, help="a,b,gamma")
        q.add_argument("--dual-shatter", dest="dual_shatter", default=None, help="c,d")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("-o", "--out", default=None)

    q = sub.add_parser("approx")
    q.add_argument("system")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--params", default=None)
    q.add_argument("--dual-shatter", dest="dual_shatter", default=None)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--out", default=None)

    for name in ("presample-match", "presample-color"):
        q = sub.add_parser(name)
        q.add_argument("system")
        q.add_argument("--alpha", type=float, required=True)
        q.add_argument("--dual-shatter", dest="dual_shatter", required=True, help="c,d")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("-o", "--out", default=None)

    q = sub.add_parser("eval")
    q.add_argument("metric", choices=["crossing", "disc", "eps"])
    q.add_argument("artifact")
    q.add_argument("system")

    q = sub.add_parser("bench")
    benchsub = q.add_subparsers(dest="bench_kind", required=True)
    b = benchsub.add_parser("disc-vs-random")
    b.add_argument("--dims", default="2,3,4")
    b.add_argument("--n-grid", dest="n_grid", default="1024,2048,4096")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--dist", default="uniform-box", choices=POINT_DISTRIBUTIONS)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--out", default=None)
    b = benchsub.add_parser("tradeoff")
    b.add_argument("--alphas", default="0.25,0.5,1.0")
    b.add_argument("--n", type=int, default=2048)
    b.add_argument("--dim", type=int, default=2)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--dist", default="uniform-box", choices=POINT_DISTRIBUTIONS)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--out", default=None)

    q = sub.add_parser("plot")
    plotsub = q.add_subparsers(dest="plot_kind", required=True)
    b = plotsub.add_parser("matching")
    b.add_argument("points")
    b.add_argument("matching")
    b.add_argument("-o", "--out", required=True)

    return parser


def _cmd_gen(args) -> int:
    if args.what == "points":
        rng = np.random.default_rng(args.seed)
        points_to_csv(gen_points(args.n, args.dim, args.dist, rng), args.out)
        return 0
    if args.what == "grid":
        points, ranges = grid_instance(args.n0, args.dim)
        save_system(GeometricSetSystem(points, ranges), args.out)
        return 0
    if args.what == "ranges":
        points = points_from_csv(args.points)
        rng = np.random.default_rng(args.seed)
        if args.kind == "halfspace-testset":
            t = args.t or max(1, math.ceil(len(points) ** (1.0 / points.shape[1])))
            ranges = build_halfspace_testset(points, t, rng=rng)
        else:
            _, ranges = build_ball_testset(points, rng=rng)
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([range_to_json(r) for r in ranges], fh)
            fh.write("\n")
        return 0
    if args.what == "system":
        if args.kind == "halfspace-testset":
            if args.n is None or args.dim is None:
                raise FormatError("one-shot gen system needs --n and --dim")
            system = make_halfspace_instance(args.n, args.dim, args.seed, args.dist, args.t)
        else:
            if not (args.points and args.ranges):
                raise FormatError("bundle mode needs --points and --ranges (or use --kind)")
            points = points_from_csv(args.points)
            with open(args.ranges, encoding="utf-8") as fh:
                ranges = ranges_from_json(json.load(fh))
            system = GeometricSetSystem(points, ranges)
        save_system(system, args.out)
        return 0
    raise FormatError(f"unknown gen target {args.what!r}")


def _cmd_match(args, color: bool) -> int:
    system = load_system(args.system)
    params = _resolve_params(args, system)
    rng = np.random.default_rng(args.seed)
    snap = system.calls.snapshot()
    matching = build_matching(system, params, rng)
    calls = system.calls.since(snap).incidence
    if color:
        coloring = color_from_matching(matching, rng)
        _emit(coloring_to_json(coloring, discrepancy(coloring, system)), args.out)
    else:
        kappa = crossing_number(matching, system)
        _emit(matching_to_json(matching, kappa, calls, args.seed), args.out)
    return 0


def _cmd_presample(args, color: bool) -> int:
    system = load_system(args.system)
    c, d = _parse_floats(args.dual_shatter, 2, "--dual-shatter")
    rng = np.random.default_rng(args.seed)
    snap = system.calls.snapshot()
    if color:
        coloring = low_disc_color_presampled(system, c, d, args.alpha, rng)
        out = coloring_to_json(coloring, discrepancy(coloring, system))
        out["alpha"] = args.alpha
    else:
        matching = matching_presampled(system, c, d, args.alpha, rng)
        calls = system.calls.since(snap).incidence
        out = matching_to_json(matching, crossing_number(matching, system), calls, args.seed)
        out["alpha"] = args.alpha
    _emit(out, args.out)
    return 0


def _cmd_approx(args) -> int:
    system = load_system(args.system)
    params = _resolve_params(args, system)
    rng = np.random.default_rng(args.seed)
    snap = system.calls.snapshot()
    result = approximate(system, params, args.eps, rng)
    calls = system.calls.since(snap).incidence
    _emit(approx_to_json(result, calls), args.out)
    return 0


def _cmd_eval(args) -> int:
    system = load_system(args.system)
    with open(args.artifact, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(
                f"{args.artifact}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    if args.metric == "crossing":
        matching = matching_from_json(obj, system.n)
        print(crossing_number(matching, system))
    elif args.metric == "disc":
        print(discrepancy(coloring_from_json(obj), system))
    else:
        try:
            subset = np.asarray(obj["subset"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"approx file: field 'subset': {exc}") from exc
        print(eps_error(subset, system))
    return 0


def _cmd_bench(args) -> int:
    if args.bench_kind == "disc-vs-random":
        dims = [int(x) for x in args.dims.split(",")]
        ns = [int(x) for x in args.n_grid.split(",")]
        rows = disc_vs_random_rows(dims, ns, args.trials, args.seed, args.dist)
    else:
        alphas = [float(x) for x in args.alphas.split(",")]
        rows = tradeoff_rows(alphas, args.n, args.dim, args.trials, args.seed, args.dist)
    text = rows_to_csv(rows, args.out)
    if not args.out:
        sys.stdout.write(text)
    return 0


def _cmd_plot(args) -> int:
    points = points_from_csv(args.points)
    with open(args.matching, encoding="utf-8") as fh:
        obj = json.load(fh)
    matching = matching_from_json(obj, len(points))
    svg = matching_svg(points, matching)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "match":
            return _cmd_match(args, color=False)
        if args.command == "color":
            return _cmd_match(args, color=True)
        if args.command == "approx":
            return _cmd_approx(args)
        if args.command == "presample-match":
            return _cmd_presample(args, color=False)
        if args.command == "presample-color":
            return _cmd_presample(args, color=True)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "plot":
            return _cmd_plot(args)
    except InfeasibleSampleError as exc:
        print(f"lowcross: infeasible: {exc}", file=sys.stderr)
        return INFEASIBLE
    except (FormatError, OSError) as exc:
        print(f"lowcross: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"lowcross: {exc}", file=sys.stderr)
        return DATA_ERROR
    parser.error(f"unknown command {args.command!r}")
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
