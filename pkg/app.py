"""
Command-line entry point.

    python app.py verify [--mode symbolic|specialized] [--s RAT] [--t RAT] [--suites LIST]
                         [--omega-n INT] [--torus-level INT] [--format json|text]
                         [--out PATH] [--workers INT] [--compare PATH]
    python app.py print-alphas [--s RAT --t RAT]
    python app.py h1 [--trivial] < group.json

Exit codes: 0 every check passed, 1 a check failed, 2 configuration or input error.
"""

import argparse
import sys
from typing import List, Optional

from config import SUITE_NAMES, validate_configuration
from backend import __version__
from backend.handlers.cli_handlers import CliHandlers, CommandResult
from backend.utils.exceptions import BaseVerifierException
from backend.utils.logging_config import get_logger, init_logging

EXIT_CONFIG_ERROR = 2

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kummer-verify",
        description="Exact verification of the double Kummer pencil constructions"
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default=None, help="DEBUG, INFO, WARNING or ERROR (default from LOG_LEVEL)")
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', help="run the verification suites and emit a report")
    verify.add_argument('--mode', choices=('symbolic', 'specialized'), default='symbolic')
    verify.add_argument('--s', dest='s', default=None, help="rational value of s (specialized mode)")
    verify.add_argument('--t', dest='t', default=None, help="rational value of t (specialized mode)")
    verify.add_argument('--suites', default=None, help=f"comma list from {','.join(SUITE_NAMES)}")
    verify.add_argument('--omega-n', type=int, default=None)
    verify.add_argument('--torus-level', type=int, default=None, help="last level of the doubling chain, a power of two")
    verify.add_argument('--format', dest='report_format', choices=('json', 'text'), default=None)
    verify.add_argument('--out', default=None, help="write the report here instead of stdout")
    verify.add_argument('--workers', type=int, default=None)
    verify.add_argument('--compare', default=None, help="earlier JSON report to diff statuses against")

    alphas = commands.add_parser('print-alphas', help="print the template quadric coefficients")
    alphas.add_argument('--s', dest='s', default=None)
    alphas.add_argument('--t', dest='t', default=None)

    h1 = commands.add_parser('h1', help="count H^1 classes of a group JSON read from stdin")
    h1.add_argument('--trivial', action='store_true', help="ignore theta and count involution classes")
    return parser


def dispatch(args: argparse.Namespace, handlers: CliHandlers) -> CommandResult:
    if args.command == 'verify':
        run_config = handlers.build_run_config(
            mode=args.mode,
            s=args.s,
            t=args.t,
            suites=args.suites,
            omega_n=args.omega_n,
            torus_level=args.torus_level,
            report_format=args.report_format,
            out=args.out,
            workers=args.workers
        )
        return handlers.verify(run_config, compare_path=args.compare)
    if args.command == 'print-alphas':
        return handlers.print_alphas(args.s, args.t)
    return handlers.h1(sys.stdin.buffer.read(), trivial=args.trivial)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(e.code or 0)

    init_logging(args.log_level)
    if not validate_configuration():
        return EXIT_CONFIG_ERROR

    try:
        result = dispatch(args, CliHandlers())
    except BaseVerifierException as e:
        logger.error("Command failed", command=args.command, error=e.error_code, detail=e.message)
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if result.output:
        sys.stdout.buffer.write(result.output)
        sys.stdout.flush()
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
