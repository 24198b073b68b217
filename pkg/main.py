#!/usr/bin/env python3
"""Main CLI application for loomp, the loop transformation engine."""

import argparse
import logging
import sys
from pathlib import Path

from src.config import BACKENDS, EXIT_DIAGNOSTICS, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, UNROLL_STRATEGIES
from src.models import LoompError, SemaError
from src.utils import dump_ast, generate_report, load_config, options_from_config, render_diagnostics, run_sweep
from src.utils.config_utils import color_enabled
from src.utils.pipeline_utils import (
    EMIT_KINDS,
    analyze_source,
    emit,
    read_source,
    run_backend,
    run_transformed,
    verify_pipeline,
)
from src.utils.report_utils import REPORT_FORMATS, summarize


class UsageError(Exception):
    """Bad command line; reported with exit code 3."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def setup_logging(debug: bool = False) -> None:
    """Configure logging settings.

    Args:
        debug: Enable debug level logging if True
    """
    level = logging.DEBUG if debug else logging.INFO

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='loomp',
        description='loomp - OpenMP loop transformations for a small C-like language',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s --emit=ast src/data/corpus/stride3.c
  %(prog)s --backend=irbuilder --verify src/data/corpus/full_over_partial.c
  %(prog)s --emit=trace --env N=10 --unroll-strategy=remainder-loop src/data/corpus/remainder.c
  %(prog)s --sweep --sweep-stride 4 --report txt
        """
    )

    parser.add_argument('file', nargs='?', help='Input source file')

    parser.add_argument(
        '--emit',
        choices=EMIT_KINDS,
        help='Artifact to print on stdout'
    )

    parser.add_argument(
        '--backend',
        choices=BACKENDS,
        help='Transformation backend (default from config: shadow)'
    )

    parser.add_argument(
        '--unroll-strategy',
        choices=UNROLL_STRATEGIES,
        help='How the shadow backend lowers a partial unroll'
    )

    parser.add_argument(
        '--heuristic-factor',
        type=int,
        metavar='N',
        help='Unroll factor chosen for an unroll without clause that an outer directive consumes'
    )

    parser.add_argument(
        '--threads',
        type=int,
        metavar='N',
        help='Size of the simulated thread team for worksharing loops'
    )

    parser.add_argument(
        '--verify',
        action='store_true',
        help='Check the transformed program against the untransformed one'
    )

    parser.add_argument(
        '--syntax-only',
        action='store_true',
        help='Stop after semantic analysis'
    )

    parser.add_argument(
        '--env',
        action='append',
        default=[],
        metavar='NAME=VALUE',
        help='Bind a runtime variable (repeatable)'
    )

    parser.add_argument(
        '--run',
        action='store_true',
        help='Run the transformed program and print its trace'
    )

    parser.add_argument(
        '--trace',
        metavar='FILE',
        help='Write the trace of --run to FILE instead of stdout'
    )

    parser.add_argument(
        '--config',
        metavar='PATH',
        help='Configuration file (default: config/loomp.json)'
    )

    parser.add_argument(
        '--color',
        choices=['auto', 'always', 'never'],
        help='Colour diagnostics'
    )

    parser.add_argument(
        '--sweep',
        action='store_true',
        help='Run the verification sweep over generated loops'
    )

    parser.add_argument(
        '--sweep-stride',
        type=int,
        default=1,
        metavar='N',
        help='Keep every N-th loop bound in the sweep'
    )

    parser.add_argument(
        '--report',
        choices=REPORT_FORMATS,
        help='Write a sweep report in the given format'
    )

    parser.add_argument(
        '--output',
        metavar='PATH',
        help='Path of the sweep report'
    )

    parser.add_argument(
        '--debug',
        action='store_true',
        help='Enable debug mode with verbose logging'
    )

    return parser


def parse_env(bindings: list[str]) -> dict[str, int]:
    """Turn ``NAME=VALUE`` strings into an environment.

    Raises:
        UsageError: If a binding is malformed
    """
    env = {}
    for binding in bindings:
        name, sep, value = binding.partition('=')
        if not sep or not name.strip():
            raise UsageError(f"--env expects NAME=VALUE, got '{binding}'")
        try:
            env[name.strip()] = int(value.strip(), 0)
        except ValueError:
            raise UsageError(f"--env value for '{name}' is not an integer: '{value}'") from None
    return env


def _sweep(args, options, stderr) -> int:
    logger = logging.getLogger(__name__)
    if args.sweep_stride < 1:
        raise UsageError(f"--sweep-stride must be positive, got {args.sweep_stride}")
    backends = [args.backend] if args.backend else None
    logger.info("Running verification sweep...")
    records = run_sweep(backends, args.sweep_stride, options)
    summary = summarize(records)
    stderr.write(f"sweep: {summary['passed']}/{summary['total']} run(s) passed\n")
    if args.report:
        path = generate_report(records, args.report, args.output)
        stderr.write(f"sweep: report written to {path}\n")
    return EXIT_VERIFY_FAILED if summary['failed'] else EXIT_OK


def _compile(args, options, env, stdout, stderr, color) -> int:
    source = read_source(args.file)
    program, sema = analyze_source(source, args.file, options)
    if sema.warnings:
        stderr.write(render_diagnostics(sema.warnings, color))

    if args.syntax_only:
        if args.emit == 'ast':
            stdout.write(dump_ast(program))
        return EXIT_OK

    result = run_backend(program, sema, options)
    if args.emit:
        stdout.write(emit(result, args.emit, env))

    if args.run or args.trace:
        text = run_transformed(result, env).to_text()
        if args.trace:
            Path(args.trace).write_text(text, encoding='utf-8')
            logging.getLogger(__name__).info(f"Trace written to {args.trace}")
        else:
            stdout.write(text)

    if args.verify:
        outcome = verify_pipeline(result, env)
        if outcome.problems:
            stderr.write(render_diagnostics(outcome.problems, color))
        stderr.write(outcome.summary() + '\n')
        if not outcome.passed:
            return EXIT_VERIFY_FAILED
    return EXIT_OK


def run_cli(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Run the driver and return its exit code.

    Exit codes: 0 success, 1 diagnostics with errors, 2 verification
    failure, 3 usage error. Emitted artifacts go to ``stdout``,
    diagnostics and log output to ``stderr``.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(parser.format_usage())
        stderr.write(f"loomp: usage error: {e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE

    setup_logging(args.debug)
    logger = logging.getLogger(__name__)
    color = False

    try:
        config = load_config(args.config)
        if args.color:
            config = dict(config, color=args.color)
        color = color_enabled(config, stderr.isatty())
        options = options_from_config(
            config,
            backend=args.backend,
            unroll_strategy=args.unroll_strategy,
            heuristic_factor=args.heuristic_factor,
            num_threads=args.threads,
        )
        env = parse_env(args.env)
        if args.sweep:
            return _sweep(args, options, stderr)
        if args.file is None:
            raise UsageError("an input file is required")
        if args.syntax_only and args.emit not in (None, 'ast'):
            raise UsageError(f"--syntax-only cannot emit '{args.emit}'")
        return _compile(args, options, env, stdout, stderr, color)
    except (UsageError, ValueError) as e:
        stderr.write(f"loomp: usage error: {e}\n")
        return EXIT_USAGE
    except SemaError as e:
        stderr.write(render_diagnostics(e.diagnostics, color))
        return EXIT_DIAGNOSTICS
    except LoompError as e:
        stderr.write(render_diagnostics([e.diagnostic], color))
        return EXIT_DIAGNOSTICS
    except OSError as e:
        logger.error(f"Cannot process {args.file}: {e}")
        stderr.write(f"loomp: error: {e}\n")
        return EXIT_DIAGNOSTICS


def main():
    """Main CLI entry point."""
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
