"""
Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 numerical failure,
3 verification failure. Data goes to stdout or files, logs to stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from greenspline import gp, io, spline
from greenspline.formatting import format_kernel_table, format_report
from greenspline.kernels import get_kernel, gram, list_kernels
from greenspline.numerics import RandomSource
from greenspline.schemas import Config, GpPrior
from greenspline.utils import (
    GreenSplineError,
    InvalidInputError,
    VerificationFailure,
    error_payload,
    get_config,
    logger,
)
from greenspline.verify import SUITES, run_verification


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so usage errors map to exit code 1."""

    def error(self, message: str):
        raise InvalidInputError(f"{self.prog}: {message}")


# ============================================================================
# Argument Parsing
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="greenspline",
        description="Green's functions, first-derivative smoothing splines and Gaussian processes on [0, 1].",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--format", choices=["text", "json"], default="text",
                       help="Output format for tables, values and errors (default: text)")
        return p

    def kernel_arg(p):
        p.add_argument("--kernel", required=True, help="Catalog kernel id (see list-kernels)")

    def grid_arg(p, default="0:1:0.05"):
        p.add_argument("--grid", default=default, help=f"start:stop:step within [0, 1] (default: {default})")

    add("list-kernels", "List every catalog kernel with its closed form and constraints")

    p = add("eval", "Evaluate G(s, t)")
    kernel_arg(p)
    p.add_argument("s", type=float)
    p.add_argument("t", type=float)

    p = add("gram", "Write the Gram matrix over a grid as CSV")
    kernel_arg(p)
    grid_arg(p)
    p.add_argument("--out", help="Output CSV (default: stdout)")

    p = add("fit", "Fit a smoothing spline to a t,y CSV")
    p.add_argument("input", help="CSV with header t,y")
    kernel_arg(p)
    p.add_argument("--lambda", dest="lam", type=float, help="Smoothing weight lambda >= 0")
    p.add_argument("--tau-sq", dest="tau_sq", type=float, help=argparse.SUPPRESS)
    grid_arg(p)
    p.add_argument("--out", default="fit", help="Output prefix for PREFIX.csv and PREFIX.json (default: fit)")

    p = add("map", "MAP estimate of the Gaussian-process posterior")
    p.add_argument("input", help="CSV with header t,y")
    kernel_arg(p)
    p.add_argument("--tau-sq", dest="tau_sq", type=float, help="Prior-to-noise variance ratio tau^2 > 0")
    p.add_argument("--lambda", dest="lam", type=float, help=argparse.SUPPRESS)
    grid_arg(p)
    p.add_argument("--out", help="Output CSV (default: stdout)")

    p = add("sample", "Sample paths of the process with covariance scale * G")
    kernel_arg(p)
    grid_arg(p)
    p.add_argument("--n", dest="count", type=int, default=1, help="Number of paths (default: 1)")
    p.add_argument("--seed", type=int, help="Random seed (default: GREENSPLINE_SEED)")
    p.add_argument("--scale", type=float, default=1.0, help="Prior scale sigma^2 tau^2 (default: 1)")
    p.add_argument("--sampler", choices=["cholesky", "increments"], default="cholesky",
                   help="increments draws Brownian motion directly (mixed kernel only)")
    p.add_argument("--out", help="Output CSV (default: stdout)")

    p = add("verify", "Run the invariant suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--N", type=int, help="Series truncation order (default: GREENSPLINE_TRUNCATION)")
    p.add_argument("--tol", type=float, help="Absolute tolerance replacing every check's own")
    p.add_argument("--seed", type=int, help="Seed for the random checks (default: GREENSPLINE_SEED)")

    return parser


def make_config(args: argparse.Namespace) -> Config:
    """Merge parsed flags with the environment and validate."""
    env = get_config()
    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields.setdefault("N", env["truncation"])
    fields.setdefault("panels", env["panels"])
    if "seed" not in fields and env["seed"] is not None:
        fields["seed"] = env["seed"]
    if "lam" in fields:
        fields["lambda"] = fields.pop("lam")
    return Config(**fields)


# ============================================================================
# Commands
# ============================================================================

def _print_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def cmd_list_kernels(config: Config) -> None:
    rows = list_kernels()
    if config.format == "json":
        _print_json(rows)
    else:
        sys.stdout.write(format_kernel_table(rows))


def cmd_eval(config: Config) -> None:
    value = get_kernel(config.kernel).eval(config.s, config.t)
    if config.format == "json":
        _print_json({"kernel": config.kernel, "s": config.s, "t": config.t, "value": value})
    else:
        sys.stdout.write(f"{value!r}\n")


def cmd_gram(config: Config) -> None:
    grid = config.grid_points
    io.write_matrix(config.out, grid, gram(get_kernel(config.kernel), grid))


def _prefix(out: str) -> Path:
    path = Path(out)
    return path.with_suffix("") if path.suffix in (".csv", ".json") else path


def cmd_fit(config: Config) -> None:
    data = io.read_dataset(config.input)
    fitted = spline.fit(config.kernel, data, config.lam)
    grid = config.grid_points
    prefix = _prefix(config.out or "fit")
    io.write_curve(f"{prefix}.csv", grid, spline.evaluate_grid(fitted, grid), "theta_hat")
    io.save_fit(f"{prefix}.json", fitted)
    logger.info(f"Fitted {config.kernel} spline (lambda={config.lam}) to {data.size} observations")


def cmd_map(config: Config) -> None:
    data = io.read_dataset(config.input)
    grid = config.grid_points
    estimate = gp.map_estimate(GpPrior(kernel=config.kernel), data, config.tau_sq, grid)
    io.write_curve(config.out, grid, estimate, "theta_map")


def cmd_sample(config: Config) -> None:
    seed = config.seed
    if seed is None:
        seed = 0
        logger.warning("no --seed or GREENSPLINE_SEED given; using seed 0")
    source = RandomSource(seed)
    grid = config.grid_points
    if config.sampler == "increments":
        if config.kernel != "mixed":
            raise InvalidInputError("the increments sampler draws Brownian motion and needs --kernel mixed")
        paths = gp.sample_bm_increments(grid, config.count, source, scale=config.scale)
    else:
        paths = gp.sample_paths(config.kernel, grid, config.count, source, scale=config.scale)
    io.write_paths(config.out, grid, paths)


def cmd_verify(config: Config) -> None:
    report = run_verification(config.suite, N=config.N, tol=config.tol, panels=config.panels, seed=config.seed)
    if config.format == "json":
        _print_json(report)
    else:
        sys.stdout.write(format_report(report))
    if not report["all_passed"]:
        failed = report["total"] - report["passed"]
        raise VerificationFailure(f"{failed} of {report['total']} checks failed")


COMMANDS: Dict[str, Callable[[Config], None]] = {
    "list-kernels": cmd_list_kernels,
    "eval": cmd_eval,
    "gram": cmd_gram,
    "fit": cmd_fit,
    "map": cmd_map,
    "sample": cmd_sample,
    "verify": cmd_verify,
}


# ============================================================================
# Entry Point
# ============================================================================

def _report_error(exc: BaseException, code: int, fmt: str) -> None:
    logger.error(str(exc))
    if fmt == "json" and not isinstance(exc, VerificationFailure):
        _print_json(error_payload(exc, code))


def main(argv: Optional[List[str]] = None) -> int:
    fmt = "text"
    try:
        args = build_parser().parse_args(argv)
        fmt = getattr(args, "format", "text")
        config = make_config(args)
        COMMANDS[config.subcommand](config)
        return 0
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        exc = InvalidInputError(f"{where + ': ' if where else ''}{first['msg']}")
        _report_error(exc, exc.exit_code, fmt)
        return exc.exit_code
    except GreenSplineError as e:
        _report_error(e, e.exit_code, fmt)
        return e.exit_code
    except OSError as e:
        exc = InvalidInputError(f"I/O error: {e}")
        _report_error(exc, exc.exit_code, fmt)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
