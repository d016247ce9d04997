"""Command line of pmaxent.

Subcommands:
- verify: run a verification suite and print its JSON report
- curve: entropy curve of a mass function along the mean-preserving flow (CSV)
- accumulate: total variation of n-fold sums to Poisson (CSV)
- maxent-probe: random Bernoulli sums against the binomial entropy (JSON)

Exit codes: 0 pass, 2 usage, 3 failed precondition, 4 failed property.
Payloads go to stdout or ``--out``; logs go to stderr.
"""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
import logging
import sys

from pmaxent import const
from pmaxent.core import families, pmf_core
from pmaxent.core.domain.errors import PmaxentError, PropertyError
from pmaxent.core.utils import utils
from pmaxent.io import files, serialize
from pmaxent.verify import experiments, pipeline

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(levelname)-8s %(name)s:%(filename)s:%(lineno)d %(message)s'
LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
# Marks the stderr handler installed by main() so repeated calls replace it
CLI_HANDLER_FLAG = '_pmaxent_cli'


def _configure_logging(level: str):
    """Send pmaxent logs to stderr at ``level``."""
    pkg_logger = logging.getLogger('pmaxent')
    for h in list(pkg_logger.handlers):
        if getattr(h, CLI_HANDLER_FLAG, False): pkg_logger.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    setattr(handler, CLI_HANDLER_FLAG, True)
    pkg_logger.addHandler(handler)
    pkg_logger.setLevel(level)


def cmd_verify(args: argparse.Namespace) -> int:
    """Run a suite; exit 0 iff every case passes."""
    report = pipeline.run_suite(args.suite, seed=args.seed, cases=args.cases, only=args.only)
    files.write_text(serialize.report_to_json(report, include_timing=args.timing), args.out)
    for case in report.failures():
        logger.error('failed case %s (seed %d): replay with --only %s', case.case_id, args.seed, case.case_id)
    return const.EXIT_OK if report.passed else const.EXIT_PROPERTY


def cmd_curve(args: argparse.Namespace) -> int:
    """Emit the entropy curve CSV."""
    X = serialize.read_pmf(args.input) if args.input else families.parse_family(args.family)
    lam = pmf_core.mean(X) if args.lam is None else args.lam
    curve = experiments.checked_curve(X, lam, utils.parse_grid(args.grid), check=args.check)
    files.write_text(serialize.curve_to_csv(curve), args.out)
    return const.EXIT_OK


def cmd_accumulate(args: argparse.Namespace) -> int:
    """Emit the accumulation CSV."""
    table = experiments.accumulate(args.lam, utils.parse_ints(args.n), base=args.base, strict=args.check)
    files.write_text(serialize.accumulation_to_csv(table), args.out)
    return const.EXIT_OK


def cmd_maxent_probe(args: argparse.Namespace) -> int:
    """Emit the probe report; exit 4 if any draw beats the binomial."""
    report = experiments.maxent_probe(args.n, args.lam, args.trials, args.seed)
    files.write_text(serialize.report_to_json(report), args.out)
    return const.EXIT_OK if report.passed else const.EXIT_PROPERTY


def _add_out(p: argparse.ArgumentParser):
    p.add_argument('--out', default=None, help='output file (default: stdout)')


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog='pmaxent', description='Discrete-distribution calculus: Poisson maximum entropy and its verification.',
    )
    parser.add_argument('--log-level', default='WARNING', choices=LOG_LEVELS, type=str.upper, help='stderr log level')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify', help='run a verification suite')
    p.add_argument('suite', choices=[*const.SUITES, const.ALL_SUITES])
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--cases', type=int, default=None, help='randomized cases per check')
    p.add_argument('--only', default=None, metavar='CASE_ID', help='replay a single case')
    p.add_argument('--timing', action='store_true', help='include wall_time in the report')
    _add_out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('curve', help='entropy curve along the flow (CSV)')
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--family', help='named family, e.g. binomial:20,0.25')
    src.add_argument('--input', help='mass function JSON file')
    p.add_argument('--lambda', dest='lam', type=float, default=None, help='preserved mean (default: mean of input)')
    p.add_argument('--grid', default=const.DEFAULT_GRID, help='alpha grid lo:hi:step')
    p.add_argument('--check', action='store_true', help='assert ULC input, decreasing and concave entropy')
    _add_out(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser('accumulate', help='total variation of n-fold sums to Poisson (CSV)')
    p.add_argument('--lambda', dest='lam', type=float, default=1.0)
    p.add_argument('--n', default=','.join(map(str, const.DEFAULT_N_LIST)), help='comma-separated counts')
    p.add_argument('--base', default='bernoulli', help='bernoulli, poisson or binomial:m')
    p.add_argument('--check', action='store_true', help='assert strict decrease and a ten-fold endpoint gain')
    _add_out(p)
    p.set_defaults(func=cmd_accumulate)

    p = sub.add_parser('maxent-probe', help='random Bernoulli sums against the binomial entropy')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--lambda', dest='lam', type=float, required=True)
    p.add_argument('--trials', type=int, default=500)
    p.add_argument('--seed', type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_maxent_probe)
    return parser


def _run(func: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    """Run a command, mapping errors to exit codes."""
    try:
        return func(args)
    except PropertyError as e:
        logger.error('%s', e)
        return const.EXIT_PROPERTY
    except PmaxentError as e:
        logger.error('%s: %s', type(e).__name__, e)
        return const.EXIT_PRECONDITION
    except ValueError as e:
        logger.error('%s', e)
        return const.EXIT_USAGE
    except OSError as e:
        logger.error('%s', e)
        return const.EXIT_PRECONDITION


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``pmaxent`` script.

    Args:
        argv: arguments without the program name (``sys.argv[1:]`` if None)

    Returns:
        int: exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _configure_logging(args.log_level)
    return _run(args.func, args)


if __name__ == '__main__':
    sys.exit(main())
