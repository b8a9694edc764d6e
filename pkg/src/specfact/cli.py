"""Command line front end: factorize, verify, and bench subcommands."""

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import (
    InputFormatError,
    NumericalBreakdownError,
    PreconditionError,
    SpectralFactorError,
)
from .factorization import FactorizationConfig, factorize
from .io import read_coefficient_file, write_coefficient_file, write_report
from .laurent import LaurentMatrix, LaurentPoly, residual_metric
from .scalar import ScalarFactorParams

_NORMALIZE = {"center": "center", "highest-upper": "highest_upper", "none": "none"}


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route flag errors through the parse category
    def error(self, message):
        raise InputFormatError(message)


def build_parser():
    parser = _Parser(prog="specfact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fac = sub.add_parser("factorize", help="compute a causal spectral factor")
    fac.add_argument("--input", required=True, help="density coefficient file")
    fac.add_argument("--output", help="where to write the factor coefficient file")
    group = fac.add_mutually_exclusive_group()
    group.add_argument("--order", type=int, default=32, help="truncation order")
    group.add_argument("--orders", help="comma separated per-step orders N2,...,Nr")
    fac.add_argument("--side", choices=("left", "right"), default="left")
    fac.add_argument(
        "--normalize", choices=tuple(_NORMALIZE), default="center",
        help="uniqueness normalization of the factor",
    )
    fac.add_argument("--scalar-grid", type=int, default=4096)
    fac.add_argument("--clamp", type=float, default=1e-12)
    fac.add_argument("--fast-solver", action="store_true",
                     help="use the structured displacement solver")
    fac.add_argument("--report", help="write a diagnostics report (JSON)")

    ver = sub.add_parser("verify", help="check a factor against a density")
    ver.add_argument("--density", required=True)
    ver.add_argument("--factor", required=True)
    ver.add_argument("--side", choices=("left", "right"), default="left")
    ver.add_argument("--tol", type=float, default=1e-6)

    ben = sub.add_parser("bench", help="random density benchmark table")
    ben.add_argument("--size", type=int, default=4)
    ben.add_argument("--degree", type=int, default=10)
    ben.add_argument("--trials", type=int, default=1)
    ben.add_argument("--order", type=int, default=32)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--jobs", type=int, default=1)
    return parser


def _factorize_config(args):
    orders = args.order
    if args.orders:
        try:
            orders = tuple(int(tok) for tok in args.orders.split(","))
        except ValueError as exc:
            raise InputFormatError(f"bad --orders value: {exc}") from exc
    scalar = ScalarFactorParams(
        grid_size=args.scalar_grid, clamp_floor=args.clamp,
        out_degree=min(64, args.scalar_grid // 2 - 1),
    )
    return FactorizationConfig(
        orders=orders,
        scalar=scalar,
        side=args.side,
        normalization=_NORMALIZE[args.normalize],
        solver="structured" if args.fast_solver else "dense",
    )


def cmd_factorize(args):
    density = read_coefficient_file(args.input)
    result = factorize(density, _factorize_config(args))
    if args.output:
        write_coefficient_file(args.output, result.factor)
    if args.report:
        write_report(args.report, result.diagnostics)
    print(f"residual {result.diagnostics.residual:.9e}")
    return 0


def cmd_verify(args):
    density = read_coefficient_file(args.density)
    factor = read_coefficient_file(args.factor)
    if args.side == "right":
        density = density.transpose()
        factor = factor.transpose()
    if (factor.rows, factor.cols) != (density.rows, density.cols):
        raise PreconditionError("factor and density dimensions differ")
    residual = residual_metric(factor, density)
    err = factor @ factor.adjoint() - density
    max_defect = max(e.max_abs() for row in err.entries for e in row)
    neg_mass = factor.negative_power_mass()
    print(f"residual {residual:.9e}")
    print(f"max_entry_defect {max_defect:.9e}")
    print(f"negative_power_mass {neg_mass:.9e}")
    # 0/4 distinguishes pass/fail from the error exit codes 1..3
    return 0 if residual <= args.tol else 4


def random_density(size, degree, rng):
    """S = A A* for a random causal A with integer coefficients in [-10, 10]."""
    coeffs = rng.integers(-10, 11, size=(size, size, degree + 1)).astype(float)
    a = LaurentMatrix(
        [[LaurentPoly(0, coeffs[i, j]) for j in range(size)] for i in range(size)]
    )
    return a, a @ a.adjoint()


def _bench_trial(task):
    size, degree, order, seed = task
    rng = np.random.default_rng(seed)
    _, density = random_density(size, degree, rng)
    # longer rows and finer grids keep the residual column meaningful for
    # high-degree densities, whose factor tails decay slowly
    width = max(384, 64 * degree)
    grid = 4096
    while grid < 8 * width:
        grid *= 2
    cfg = FactorizationConfig(
        orders=order,
        normalization="none",
        row_window=width,
        scalar=ScalarFactorParams(grid_size=grid, out_degree=64, clamp_floor=1e-12),
    )
    start = time.perf_counter()
    result = factorize(density, cfg)
    elapsed = time.perf_counter() - start
    return size, degree, elapsed, result.diagnostics.residual


def cmd_bench(args):
    if args.trials < 0:
        raise PreconditionError("--trials must be nonnegative")
    tasks = [
        (args.size, args.degree, args.order, args.seed + k)
        for k in range(args.trials)
    ]
    print(f"{'size':>8} {'time_s':>10} {'residual':>12}")
    if not tasks:
        return 0
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_trial, tasks))
    else:
        rows = [_bench_trial(t) for t in tasks]
    for size, degree, elapsed, residual in rows:
        print(f"{f'{size}x{degree}':>8} {elapsed:>10.3f} {residual:>12.2e}")
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "factorize": cmd_factorize,
            "verify": cmd_verify,
            "bench": cmd_bench,
        }[args.command]
        return handler(args)
    except InputFormatError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: precondition: {exc}", file=sys.stderr)
        return 2
    except (NumericalBreakdownError, SpectralFactorError) as exc:
        print(f"error: breakdown: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
