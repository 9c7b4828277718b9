from __future__ import annotations
import argparse
import logging
import textwrap
import sys
from pathlib import Path
from dotenv import load_dotenv
from pydantic import ValidationError

from .errors import PMatrixToolkitError
from .io_utils import write_report
from .settings import get_settings
from .suites import SUITES
from . import runners

METHODS = ["minors", "sign-reversal", "both"]


def _add_matrix_source(sub: argparse.ArgumentParser, flag: str, help_text: str) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument(flag, type=Path, default=None, help=help_text)
    group.add_argument("--preset", default=None, help="Named preset from the operator zoo, truncated to --n.")
    sub.add_argument("--n", type=int, default=None, help="Truncation size for --preset (defaults to the preset's own).")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmatrix-toolkit",
        description="Detect P-matrices, enumerate LCP solutions and check the operator zoo.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=textwrap.dedent(
            """
            Examples:
              python -m pmatrix_toolkit.main analyze --input swap2.json --method both
              python -m pmatrix_toolkit.main operator --preset example-6 --n 4 --basis block-hadamard
              python -m pmatrix_toolkit.main lcp --matrix a.json --samples 100 --seed 42
              python -m pmatrix_toolkit.main verify-paper --max-n 32 --seed 42
            """
        ),
    )
    parser.add_argument("--out", type=Path, default=None, help="Also write the JSON report to this file.")
    parser.add_argument("--no-timing", action="store_true", help="Omit the timing object from the report.")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Decide whether a matrix is a P-matrix.")
    _add_matrix_source(analyze, "--input", "Matrix file (.json or .csv).")
    analyze.add_argument("--method", choices=METHODS, default="both", help="Detection route (default: both).")

    operator = commands.add_parser("operator", help="P-test a truncated zoo operator, optionally in the block Hadamard basis.")
    source = operator.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", default=None, help="Preset name, e.g. example-6.")
    source.add_argument("--spec", type=Path, default=None, help="Operator spec file {\"kind\": ..., \"params\": {...}} (needs --n).")
    operator.add_argument("--n", type=int, default=None, help="Truncation size (defaults to the preset's own).")
    operator.add_argument("--basis", choices=["standard", "block-hadamard"], default="standard", help="Basis to test against.")
    operator.add_argument(
        "--method",
        choices=METHODS + ["auto"],
        default="auto",
        help="Detection route; auto runs both while n is within the witness cap.",
    )

    lcp = commands.add_parser("lcp", help="Enumerate LCP solutions for one q, or sample q and count solutions.")
    _add_matrix_source(lcp, "--matrix", "Matrix file (.json or .csv).")
    rhs = lcp.add_mutually_exclusive_group(required=True)
    rhs.add_argument("--q", type=Path, default=None, help="Vector file for q.")
    rhs.add_argument("--samples", type=int, default=None, help="Number of q drawn uniformly from [-1, 1]^n.")
    lcp.add_argument("--seed", type=int, default=None, help="Sampling seed (default from PMAT_SEED, 42).")

    verify = commands.add_parser("verify-paper", help="Run the verification suites.")
    verify.add_argument("--max-n", type=int, default=32, help="Largest n the suites enumerate (default 32).")
    verify.add_argument("--seed", type=int, default=None, help="Seed for every suite (default from PMAT_SEED, 42).")
    verify.add_argument("--suite", action="append", choices=list(SUITES), default=None, help="Run only this suite (repeatable).")
    verify.add_argument("--quick", action="store_true", help="Run a tenth of the samples in the sampled suites.")
    return parser


def _dispatch(args: argparse.Namespace) -> runners.CommandResult:
    if args.command == "analyze":
        return runners.cmd_analyze(args.input, args.method, preset=args.preset, n=args.n)
    if args.command == "operator":
        return runners.cmd_operator(args.preset, args.n, args.basis, args.method, spec_path=args.spec)
    if args.command == "lcp":
        return runners.cmd_lcp(args.matrix, args.q, args.samples, args.seed, preset=args.preset, n=args.n)
    return runners.cmd_verify_paper(args.max_n, args.seed, args.suite, 10 if args.quick else 1)


def run_cli(argv: list[str] | None = None) -> int:
    # load dotenv here as well (safe no-op if already loaded)
    load_dotenv()

    parser = _build_parser()
    args = parser.parse_args(argv)

    if getattr(args, "n", None) is not None and args.n < 1:
        print(f"Error: --n must be positive, got {args.n}", file=sys.stderr)
        return runners.EXIT_INPUT_ERROR
    if getattr(args, "samples", None) is not None and args.samples < 1:
        print(f"Error: --samples must be positive, got {args.samples}", file=sys.stderr)
        return runners.EXIT_INPUT_ERROR
    if getattr(args, "max_n", None) is not None and args.max_n < 1:
        print(f"Error: --max-n must be positive, got {args.max_n}", file=sys.stderr)
        return runners.EXIT_INPUT_ERROR

    try:
        settings = get_settings()
        logging.basicConfig(stream=sys.stderr, level=settings.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
        outcome = _dispatch(args)
        write_report(outcome.report, args.out, include_timing=not args.no_timing)
    except (PMatrixToolkitError, ValidationError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return runners.EXIT_INPUT_ERROR

    print(outcome.summary, file=sys.stderr)
    return outcome.exit_code
