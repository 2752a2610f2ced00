"""Command line entry point: ``nsipm solve`` and ``nsipm verify``."""

import argparse
import json
import sys

from . import io, verify
from .errors import NsipmError, ParameterError, ProblemFileError
from .solver import (
    DUAL_INFEASIBLE,
    ILL_POSED,
    ITERATION_LIMIT,
    OPTIMAL,
    PRIMAL_INFEASIBLE,
    SolverParams,
    solve,
)

EXIT_USAGE = 64
EXIT_PARSE = 65
EXIT_INTERNAL = 70

STATUS_EXIT = {
    OPTIMAL: 0,
    PRIMAL_INFEASIBLE: 2,
    DUAL_INFEASIBLE: 3,
    ILL_POSED: 4,
    ITERATION_LIMIT: 5,
}


class _Parser(argparse.ArgumentParser):
    """argparse with the usage-error exit code set to 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _unit_real(text):
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"expected a real in (0, 1), got {text}")
    return value


def build_parser():
    parser = _Parser(prog="nsipm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a JSON problem file")
    sp.add_argument("--problem", required=True, help="path to the JSON problem")
    sp.add_argument("--preset", type=int, choices=(1, 2), default=1)
    sp.add_argument("--eps", type=_unit_real, default=1e-8,
                    help="relative reduction of the gap and residual (default 1e-8)")
    sp.add_argument("--line-search", action="store_true",
                    help="take the longest grid step that stays in the wide neighborhood")
    sp.add_argument("--trace", help="write a per-step CSV trace to this path")
    sp.add_argument("--max-iters", type=_positive_int)
    sp.add_argument("--no-timing", action="store_true",
                    help="write wall_ms as 0 so traces are byte-reproducible")

    vp = sub.add_parser("verify", help="run the numerical inequality checks")
    vp.add_argument("--suite", choices=verify.SUITES, default="all")
    vp.add_argument("--samples", type=_positive_int, default=1000)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--report", help="write one JSON record per check to this path")
    return parser


def cmd_solve(args, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        problem = io.parse_problem(args.problem)
    except ProblemFileError as exc:
        print(f"nsipm: {exc}", file=stderr)
        return EXIT_PARSE
    try:
        params = SolverParams(preset=args.preset, eps=args.eps, max_iters=args.max_iters,
                              line_search=args.line_search)
    except ParameterError as exc:
        print(f"nsipm: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        out = solve(problem, params)
    except NsipmError as exc:
        print(f"nsipm: internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    if args.trace:
        io.write_trace(out.trace, args.trace, deterministic=args.no_timing)
    json.dump(io.outcome_to_dict(out), stdout, sort_keys=True)
    stdout.write("\n")
    return STATUS_EXIT[out.status]


def cmd_verify(args, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        reports = verify.run_suite(args.suite, args.samples, args.seed)
    except NsipmError as exc:
        print(f"nsipm: internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    failed = []
    for rep in reports:
        print(rep.line(), file=stdout)
        if rep.check == "violation_reproduced" and rep.passed:
            print(f"violation reproduced: {rep.instance} "
                  f"(measured {rep.rhs:.6g} > bound {rep.lhs:.6g})", file=stdout)
        if not rep.passed:
            failed.append(rep.check)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            for rep in reports:
                fh.write(rep.to_json() + "\n")
    if failed:
        print("failing checks: " + ", ".join(sorted(set(failed))), file=stdout)
        return 1
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        return cmd_verify(args)
    except Exception as exc:  # last-resort mapping onto the contractual exit code
        print(f"nsipm: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
