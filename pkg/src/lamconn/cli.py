"""Command-line batch runner.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 input or usage
error.
"""

from __future__ import annotations

import argparse
import sys

from .builtins_lib import builtin_scenario
from .errors import ParseError, ResolutionError
from .report import Report
from .scenario import RunOptions, _parse_window, load_scenario, run_scenario
from .verify import verify_paper

USAGE_ERROR = 2


def _add_common(parser: argparse.ArgumentParser, with_example: bool = True):
    parser.add_argument("scenario", nargs="*", help="scenario file(s) (TOML)")
    if with_example:
        parser.add_argument("--example", help="load a built-in example by name")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument("--window", help="degree window override LO:HI")
    parser.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report format (structured output is byte-stable per seed)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamconn",
        description=(
            "Exact workbench for lambda-connections, transport between "
            "infinitesimally close pullbacks, and Higgs bundle deformations "
            "via Cech cocycles."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("check", "validate geometric data / run a scenario's tasks"),
        ("deform", "run the deformation pipeline tasks"),
        ("cohomology", "run windowed cohomology tasks"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    vp = sub.add_parser("verify-paper", help="run the full built-in verification suite")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--format", choices=("text", "structured"), default="text")
    vp.add_argument(
        "--debug-flip-m-theta",
        action="store_true",
        help="negative control: corrupt the m_theta sign so the suite must fail",
    )
    return parser


def _emit(report: Report, fmt: str) -> None:
    if fmt == "structured":
        sys.stdout.write(report.to_structured())
    else:
        print(report.to_text())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; preserve both
        return int(exc.code or 0)

    if args.command == "verify-paper":
        report = verify_paper(args.seed, flip_sign=args.debug_flip_m_theta)
        _emit(report, args.format)
        return report.exit_code()

    try:
        options = RunOptions(seed=args.seed, window=_parse_window(args.window))
        scenarios = []
        if args.example:
            scenarios.append(builtin_scenario(args.example))
        for path in args.scenario:
            scenarios.append(load_scenario(path))
        if not scenarios:
            print("error: give a scenario file or --example NAME", file=sys.stderr)
            return USAGE_ERROR
        worst = 0
        for scn in scenarios:
            report = run_scenario(scn, options, subcommand=args.command)
            _emit(report, args.format)
            worst = max(worst, report.exit_code())
        return worst
    except (ParseError, ResolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
