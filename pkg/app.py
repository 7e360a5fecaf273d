"""
Main application entry point
cqdist: classical/quantum distance toolkit command line

VERSION HISTORY:
1.2.0 - verify command and --functional switch - 18/10/26
      ADDITIONS:
      - verify routes to the closed-form checks
      - --functional picks density or pure for pure-state sources
1.1.0 - Parameter sweeps - 18/10/26
      ADDITIONS:
      - --sweep NAME=START:STOP:STEP (one or two occurrences)
1.0.0 - Whitelisted command routing with exit-code contract - 18/10/26
      SECURITY IMPROVEMENTS:
      - Only commands in ALLOWED_COMMANDS can be routed
      - Unexpected errors are logged server-side, user sees one sanitized line
KEY FUNCTIONS:
- build_parser / build_request
- run_command (whitelist check and error to exit-code mapping)
- main
"""
import argparse
import logging
import sys
from typing import List, Optional

from components.commands import (
    COMMANDS,
    CommandOutput,
    RunRequest,
    parse_assignment,
    parse_interval,
    parse_sweep
)
from config import get_settings
from modules.errors import CqdistError, RequestError

# Configure logging
logger = logging.getLogger(__name__)

# Whitelist of routable commands
ALLOWED_COMMANDS = ('list', 'compute', 'curve', 'compare', 'sweep', 'verify')


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors through the toolkit's exit-code contract"""

    def error(self, message: str):
        raise RequestError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='cqdist',
        description='Distance between classical and quantum dynamics for finite-dimensional states'
    )
    parser.add_argument('command', help=f"one of: {', '.join(ALLOWED_COMMANDS)}")
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--example', metavar='LABEL', help='built-in catalog entry (see `cqdist list`)')
    source.add_argument('--spec', metavar='FILE', help='trajectory spec JSON file')
    parser.add_argument('--set', dest='assignments', action='append', default=[], metavar='NAME=VALUE',
                        help='override a declared parameter (repeatable)')
    parser.add_argument('--interval', metavar='T0:T1',
                        help='integration interval, decimal literals; use --interval=-4:4 for negative starts')
    parser.add_argument('--tol', type=float, help='absolute quadrature tolerance')
    parser.add_argument('--samples', type=int, help='grid size for curve, compare and verify')
    parser.add_argument('--gauge', default='optimal', help='optimal | zero | expr:"..."')
    parser.add_argument('--functional', choices=('density', 'pure'),
                        help='functional for pure-state sources (default: pure)')
    parser.add_argument('--sweep', dest='sweeps', action='append', default=[],
                        metavar='NAME=START:STOP:STEP', help='swept parameter (one or two)')
    parser.add_argument('--json', action='store_true', help='print the report as one JSON object')
    parser.add_argument('--out', metavar='FILE', help='write CSV output to FILE instead of stdout')
    return parser


def build_request(argv: Optional[List[str]] = None) -> RunRequest:
    """
    Parse command-line arguments into a RunRequest

    Raises:
        RequestError: unknown command or malformed option
    """
    args = build_parser().parse_args(argv)

    # SECURITY: Validate command against whitelist
    if args.command not in ALLOWED_COMMANDS:
        raise RequestError(f"Unknown command '{args.command}'; expected one of {', '.join(ALLOWED_COMMANDS)}")

    overrides = dict(parse_assignment(text) for text in args.assignments)
    return RunRequest(
        command=args.command,
        example=args.example,
        spec_path=args.spec,
        overrides=overrides,
        interval=parse_interval(args.interval) if args.interval else None,
        tol=args.tol,
        samples=args.samples,
        gauge=args.gauge,
        functional=args.functional,
        sweeps=[parse_sweep(text) for text in args.sweeps],
        json=args.json,
        out=args.out
    )


def run_command(argv: Optional[List[str]] = None) -> CommandOutput:
    """
    Route one invocation to its handler

    Toolkit errors become their exit code with a one-line message on stderr;
    anything else is logged with its traceback and exits 1.
    """
    try:
        req = build_request(argv)
        return COMMANDS[req.command](req)

    except CqdistError as e:
        logger.debug(f"{type(e).__name__}: {e}", exc_info=True)
        return CommandOutput('', e.exit_code, f"error: {e}")

    except Exception as e:
        # SECURITY: Don't expose internal error details to user
        logger.error(f"Unexpected failure: {str(e)}", exc_info=True)
        return CommandOutput('', 1, 'error: internal failure, see log output')


def main(argv: Optional[List[str]] = None) -> int:
    """Main application logic"""
    try:
        level = get_settings().log_level
    except CqdistError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code

    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )

    output = run_command(argv)
    if output.text:
        sys.stdout.write(output.text)
    if output.message:
        sys.stderr.write(output.message + '\n')
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
