"""Command-line interface: ``meanaudit <command> [options]``.

Exit codes: 0 on success, 1 when a check or expectation fails, 2 for usage,
parse and input errors. Results go to standard output (or ``--out``) and
messages to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from mpmath import mp

from . import oracle
from ._version import __version__
from .audit import check_expectations, run_audit, sign_change_scan
from .config import RunConfig
from .constants import CONSTANT_CLAIMS, apply_ratio_bound, extremum_scan
from .convexity import verify_convexity, log_grid
from .exceptions import (
    ClaimSyntaxError,
    ExpectationMismatch,
    InvalidPairError,
    MeanOverflowError,
    MeanParameterError,
    MultipleExpectationMismatches,
    SuiteFormatError,
)
from .genfn import CONVEX_PAIRS
from .means import MeanKind, PositivePair, mean_value
from .plotdata import TARGETS, write_plot_data
from .sampling import draw_pairs
from .suite import bundled_suite, load_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad input detected after argument parsing; maps to exit code 2."""


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (default 42)")
    common.add_argument("--samples", type=int, help="sample count (default 100000)")
    common.add_argument("--grid", type=int, help="grid points (default 10000)")
    common.add_argument("--xmin", type=float, help="lower end of the x range (default 1e-6)")
    common.add_argument("--xmax", type=float, help="upper end of the x range (default 1e6)")
    common.add_argument(
        "--oracle", action="store_true", help="add extended-precision values to the output"
    )
    common.add_argument("--out", type=Path, help="write output to PATH instead of stdout")
    common.add_argument("--suite", type=Path, help="claim suite file (default: bundled)")
    common.add_argument("--workers", type=int, help="threads for the audit (default 1)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="meanaudit",
        description="Evaluate bivariate means and audit inequalities between them.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("eval", parents=[common], help="evaluate one mean at (a, b)")
    p.add_argument("kind", help="H, G, L, N1, N2, N3, A, S, B[t] or DP[r]")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)

    p = sub.add_parser("audit", parents=[common], help="audit a claim suite")
    p.add_argument(
        "--expect-mode",
        choices=("strict", "collect", "lenient"),
        default="collect",
        help="how expectation mismatches are reported (default collect)",
    )

    sub.add_parser("constants", parents=[common], help="best constants of the ratio pairs")
    sub.add_parser("convexity", parents=[common], help="convexity checks of the measures")

    p = sub.add_parser("scan", parents=[common], help="sign-change scan of E(1, x)")
    p.add_argument("expr", help="expression, e.g. '(S+5*L)/6 - (2*N2+3*L)/5'")

    p = sub.add_parser("plot-data", parents=[common], help="write CSV curves")
    p.add_argument("target", choices=sorted(TARGETS))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """:raises ConfigError: For out-of-range option values."""
    return RunConfig().with_updates(
        seed=args.seed,
        samples=args.samples,
        grid_points=args.grid,
        x_min=args.xmin,
        x_max=args.xmax,
        precision_mode="oracle" if args.oracle else None,
        output_path=args.out,
        workers=args.workers,
    )


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text, encoding="utf-8")


def _cmd_eval(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        kind = MeanKind.from_symbol(args.kind)
        p = PositivePair(args.a, args.b)
        value = mean_value(kind, p)
    except (MeanParameterError, InvalidPairError, MeanOverflowError) as e:
        raise UsageError(str(e)) from e
    lines = [f"{value:.17g}"]
    if cfg.precision_mode == "oracle":
        lines.append(mp.nstr(oracle.mean_value(kind, p), 30))
    _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        suite = load_suite(args.suite) if args.suite else bundled_suite()
    except (OSError, SuiteFormatError) as e:
        raise UsageError(str(e)) from e
    report = run_audit(suite, cfg)
    _emit(report.to_json(), cfg)
    try:
        mismatches = check_expectations(report, mode=args.expect_mode)
    except MultipleExpectationMismatches as e:
        for m in e.mismatches:
            print(f"meanaudit: {m}", file=sys.stderr)
        return EXIT_FAILED
    except ExpectationMismatch as e:
        print(f"meanaudit: {e}", file=sys.stderr)
        return EXIT_FAILED
    met = len(report.entries) - len(mismatches)
    print(f"meanaudit: {met}/{len(report.entries)} expectations met", file=sys.stderr)
    return EXIT_FAILED if mismatches else EXIT_OK


def _cmd_constants(args: argparse.Namespace, cfg: RunConfig) -> int:
    sample = draw_pairs(cfg.seed, cfg.samples, cfg.near_equal_samples or 0)
    header = "pair      claimed  g(1)   sup                  argmax      inf                  pattern  violations"
    rows = [header]
    failed = False
    for claim in CONSTANT_CLAIMS:
        profile = extremum_scan(
            claim.numerator,
            claim.denominator,
            x_min=cfg.x_min,
            x_max=cfg.x_max,
            points=cfg.grid_points,
        )
        bound = profile.with_bounds(beta=float(claim.claimed))
        violations = apply_ratio_bound(bound, sample)
        pattern = ("ok" if profile.sign_pattern_ok else "broken") if claim.monotone_pattern else "-"
        failed |= profile.value_at_one != claim.claimed or violations > 0
        rows.append(
            f"{claim.key:<9} {str(claim.claimed):<8} {str(profile.value_at_one):<6} "
            f"{profile.sup:<20.17g} {profile.argmax:<11.6g} {profile.inf:<20.17g} "
            f"{pattern:<8} {violations}"
        )
    _emit("\n".join(rows) + "\n", cfg)
    return EXIT_FAILED if failed else EXIT_OK


def _cmd_convexity(args: argparse.Namespace, cfg: RunConfig) -> int:
    grid = log_grid(cfg.x_min, cfg.x_max, cfg.grid_points)
    rows: List[str] = []
    failed = False
    for pair in CONVEX_PAIRS:
        verdict = verify_convexity(pair, grid, samples=min(cfg.samples, 10_000), seed=cfg.seed)
        status = "PASS" if verdict.passed else "FAIL"
        failed |= not verdict.passed
        rows.append(
            f"{pair.label:<4} {status}  min f''={verdict.second_derivative_min:.3g} "
            f"at x={verdict.second_derivative_argmin:.6g}  fd err={verdict.fd_max_rel_err:.2g}  "
            f"tangent={verdict.eq13_violations}  midpoint={verdict.midpoint_violations}"
        )
        rows.extend(f"    {f}" for f in verdict.failures())
    _emit("\n".join(rows) + "\n", cfg)
    return EXIT_FAILED if failed else EXIT_OK


def _cmd_scan(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        report = sign_change_scan(args.expr, cfg.x_min, cfg.x_max, cfg.grid_points)
    except (ClaimSyntaxError, ValueError) as e:
        raise UsageError(str(e)) from e
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", cfg)
    return EXIT_OK


def _cmd_plot_data(args: argparse.Namespace, cfg: RunConfig) -> int:
    kwargs = dict(x_min=cfg.x_min, x_max=cfg.x_max, points=cfg.grid_points)
    if cfg.output_path is None:
        write_plot_data(args.target, sys.stdout, **kwargs)  # type: ignore[arg-type]
    else:
        with open(cfg.output_path, "w", newline="", encoding="utf-8") as fh:
            write_plot_data(args.target, fh, **kwargs)  # type: ignore[arg-type]
    return EXIT_OK


_COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "eval": _cmd_eval,
    "audit": _cmd_audit,
    "constants": _cmd_constants,
    "convexity": _cmd_convexity,
    "scan": _cmd_scan,
    "plot-data": _cmd_plot_data,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(args)
        return _COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError, OSError) as e:
        print(f"meanaudit: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
