import argparse
import json
import sys
from importlib.metadata import PackageNotFoundError, version
from typing import List, Optional
from rich.markup import escape
from distill import __version__
from distill.api.model import DistillError
from distill.ui.commands import (
    cmd_analyze,
    cmd_decide,
    cmd_embed,
    cmd_reduce,
    cmd_simulate,
)
from distill.utils.conf_reader import CONFIG_DIR
from distill.utils.log import setup_logging, stderr
from distill.utils.parser import Parser

EXIT_CODES = """exit codes:
  0  success
  1  other failure
  2  malformed document
  3  invariant violation (e.g. matrix not column-stochastic)
  4  non-homogeneous target handed to embed
  5  no decay certificate below the search cap
"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="instance document (JSON or YAML)")
    common.add_argument("--json", action="store_true", help="Print the report as JSON")
    common.add_argument("--report", metavar="FILE", help="Also write the report as JSON to FILE")
    common.add_argument("--verbose", action="store_true", help="Log stage details")
    common.add_argument("-q", "--quiet", action="store_true", help="Only log errors")

    parser = argparse.ArgumentParser(
        prog="distill",
        description="Reduce Markov chain model checking to linear dynamical systems",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-V", "--version", help="Show version", action="store_true")
    parser.add_argument(
        "--config-path", help="Show the user configuration directory", action="store_true"
    )

    sub = parser.add_subparsers(dest="command")
    sub.add_parser("analyze", parents=[common], help="Spectral profile of the chain")

    reduce = sub.add_parser("reduce", parents=[common], help="Reduce to a linear dynamical system")
    reduce.add_argument("--out", help="Write the reduced instance here")

    decide = sub.add_parser("decide", parents=[common], help="Decide the instance where possible")
    decide.add_argument("--horizon", type=int, help="Bounded simulation length")

    embed = sub.add_parser("embed", parents=[common], help="Embed a linear dynamical system")
    embed.add_argument("--out", help="Write the Markov chain instance here")
    embed.add_argument("--stationary", help="Document holding the stationary distribution")
    embed.add_argument(
        "--no-scale", action="store_true", help="Keep rho = 1 and check its precondition"
    )

    simulate = sub.add_parser("simulate", parents=[common], help="Exact distributions and letters")
    simulate.add_argument("--steps", type=int, help="Number of steps")

    return parser


def run_command(args: argparse.Namespace):
    if args.command == "analyze":
        return cmd_analyze(args.file)
    if args.command == "reduce":
        return cmd_reduce(args.file, args.out)
    if args.command == "decide":
        return cmd_decide(args.file, args.horizon)
    if args.command == "embed":
        return cmd_embed(args.file, args.out, args.stationary, not args.no_scale)
    if args.command == "simulate":
        return cmd_simulate(args.file, args.steps)

    raise DistillError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        try:
            ver = version("distill")
        except PackageNotFoundError:
            ver = __version__
        print(f"distill - {ver}")
        return 0

    if args.config_path:
        print(CONFIG_DIR)
        return 0

    if not args.command:
        parser.print_help()
        return 1

    setup_logging("DEBUG" if args.verbose else "ERROR" if args.quiet else None)

    try:
        report = run_command(args)
        if args.report:
            Parser().save(args.report, report.to_data())
    except DistillError as e:
        stderr.print(f"[red]error[/red] ({type(e).__name__}): {escape(str(e))}", highlight=False)
        return e.exit_code

    if args.json:
        sys.stdout.write(json.dumps(report.to_data(), indent=2) + "\n")
    else:
        report.print()

    return 0


if __name__ == "__main__":
    sys.exit(main())
