# -*- coding: utf-8 -*-
"""
Command-line entry point
One binary with purity, steer, game and memory subcommands
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from uqlab._core.errors import UQLabError
from uqlab.commands import game, memory, purity, steer
from uqlab.utils.logger import setup_logging
from uqlab.utils.report import FORMATS, emit_report

logger = logging.getLogger('uqlab')

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2

HANDLERS = {
    'purity': (purity, 'Robertson-Schrodinger mixedness witness'),
    'steer': (steer, 'Reid and entropic steering for Laguerre-Gaussian modes'),
    'game': (game, 'retrieval game values under classical, quantum and no-signaling theories'),
    'memory': (memory, 'entropic uncertainty bounds with quantum memory'),
}


@dataclass
class RunConfig:
    """Validated options for one run"""
    subcommand: str
    options: Dict[str, Any] = field(default_factory=dict)
    output_format: str = 'json'
    output_path: Optional[str] = None
    seed: Optional[int] = None
    log_level: Optional[str] = None


class UsageError(Exception):
    """Raised by parse_config instead of exiting"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='json', dest='output_format',
                        help='report format (default json)')
    common.add_argument('--output', dest='output_path', help='write the report to a file')
    common.add_argument('--seed', type=int, help='seed for randomized steps')
    common.add_argument('--log-level', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'),
                        help='overrides LOG_LEVEL')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='uqlab', description='Uncertainty-relation analyses')
    sub = parser.add_subparsers(dest='subcommand', parser_class=_Parser)
    common = _common_options()
    for name, (module, help_text) in HANDLERS.items():
        module.add_arguments(sub.add_parser(name, help=help_text, description=help_text,
                                            parents=[common]))
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """
    Parse and validate command-line arguments

    Raises:
        UsageError: unknown flag, missing option or invalid value
    """
    args = build_parser().parse_args(list(argv))
    if args.subcommand is None:
        raise UsageError(f'uqlab: a subcommand is required ({", ".join(HANDLERS)})')
    module, _ = HANDLERS[args.subcommand]
    options, error = module._validate_options(args)
    if error:
        raise UsageError(f'uqlab {args.subcommand}: {error}')
    return RunConfig(
        subcommand=args.subcommand,
        options=options,
        output_format=args.output_format,
        output_path=args.output_path,
        seed=args.seed,
        log_level=args.log_level,
    )


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except UsageError as e:
        build_parser().print_usage(sys.stderr)
        sys.stderr.write(f'{e}\n')
        return EXIT_USAGE

    setup_logging(config.log_level)
    module, _ = HANDLERS[config.subcommand]
    try:
        reports = module.run(config.options, config.seed)
        emit_report(reports if len(reports) > 1 else reports[0],
                    config.output_format, config.output_path)
    except (UQLabError, ValueError) as e:
        logger.error('%s failed: %s', config.subcommand, e)
        return EXIT_COMPUTATION
    return EXIT_OK
