"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 computation error
(budget, non-countable input, failed fit), 4 verification mismatch.
"""

import argparse
import json
import sys
from typing import List, Optional

from . import dsl
from .errors import ComputationError, ParseError
from .oracle import DEFAULT_BUDGET, CountingProblem, budget_from_env, count_points
from .runner import (
    EXIT_COMPUTE, EXIT_PARSE, EXIT_USAGE, OutputRecord, Session, render_plain,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _prime(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a prime, got {text!r}") from None
    if not dsl.is_small_prime(value):
        raise argparse.ArgumentTypeError(f"{value} is not a prime in [2, {dsl.MAX_PRIME}]")
    return value


def _prime_list(text):
    primes = [_prime(part.strip()) for part in text.split(",") if part.strip()]
    if not primes:
        raise argparse.ArgumentTypeError("expected a comma-separated list of primes")
    return primes


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset after it.
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print machine-readable JSON records")
    common.add_argument("--budget", type=_positive_int, default=argparse.SUPPRESS,
                        help=f"enumeration cap in points (default {DEFAULT_BUDGET}, or $MOTIVIC_BUDGET)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for the demo's second center placement (output is deterministic)")

    parser = _Parser(prog="motivic", description="Classes in the Grothendieck ring of varieties.")
    parser.add_argument("--json", action="store_true", default=False, help=argparse.SUPPRESS)
    parser.add_argument("--budget", type=_positive_int, default=None, help=argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=0, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("normalize", parents=[common], help="canonical class of an expression")
    p.add_argument("expr")
    p = sub.add_parser("equiv", parents=[common], help="L-equivalence of two expressions")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("modl", parents=[common], help="class modulo L (stable-birational invariant)")
    p.add_argument("expr")
    p = sub.add_parser("rational", parents=[common], help="rationality witness M with [X] = [P^d] + L*M")
    p.add_argument("expr")
    p.add_argument("--dim", type=int, required=True)
    p = sub.add_parser("birat", parents=[common], help="M with [X] - [Y] = L*M")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("count", parents=[common], help="count F_p-points by enumeration")
    p.add_argument("expr")
    p.add_argument("--p", type=_prime, required=True)
    p = sub.add_parser("verify", parents=[common], help="compare oracle counts with the normalized class")
    p.add_argument("expr")
    p.add_argument("--primes", type=_prime_list, default=[2, 3, 5, 7])
    p = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    p.add_argument("name", choices=["lesieutre"])
    p.add_argument("--points", type=_positive_int, default=8)
    p = sub.add_parser("run", parents=[common], help="execute a .mot script")
    p.add_argument("file")
    p = sub.add_parser("count-problem", parents=[common], help="count points of a JSON counting problem")
    p.add_argument("file")
    return parser


def _command_from_args(args) -> dsl.Command:
    source = " ".join(getattr(args, a) for a in ("expr", "left", "right") if hasattr(args, a))
    if args.command == "normalize":
        return dsl.Normalize(dsl.parse_expr(args.expr), source)
    if args.command == "equiv":
        return dsl.Equiv(dsl.parse_expr(args.left), dsl.parse_expr(args.right), source)
    if args.command == "modl":
        return dsl.ModL(dsl.parse_expr(args.expr), source)
    if args.command == "rational":
        if args.dim < 0:
            raise UsageError("--dim must be non-negative")
        return dsl.Rationality(dsl.parse_expr(args.expr), args.dim, source)
    if args.command == "birat":
        return dsl.BiratDiff(dsl.parse_expr(args.left), dsl.parse_expr(args.right), source)
    if args.command == "count":
        return dsl.Count(dsl.parse_expr(args.expr), args.p, source)
    if args.command == "verify":
        return dsl.Verify(dsl.parse_expr(args.expr), tuple(args.primes), source)
    if args.command == "demo":
        return dsl.DemoLesieutre(args.points, f"lesieutre points={args.points}")
    raise UsageError(f"unknown command {args.command!r}")


def _count_problem(path, budget) -> OutputRecord:
    record = OutputRecord("count-problem", path)
    try:
        problem = CountingProblem.load(path)
    except ParseError as exc:
        return record.fail(EXIT_PARSE, f"parse error at {exc.line}:{exc.col}: {exc.message}")
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return record.fail(EXIT_USAGE, f"cannot load counting problem: {exc}")
    except ComputationError as exc:
        return record.fail(EXIT_COMPUTE, f"computation error: {exc}")
    try:
        record.result = {"problem": problem.to_json(), **count_points(problem, budget).to_json()}
    except ComputationError as exc:
        record.fail(EXIT_COMPUTE, f"computation error: {exc}")
    return record


def _emit(record: OutputRecord, as_json: bool, out, err) -> int:
    if as_json:
        out.write(json.dumps(record.to_json(), indent=2) + "\n")
    elif record.status == "ok" or record.command == "run":
        text = render_plain(record)
        if text:
            out.write(text + "\n")
    for message in record.diagnostics:
        err.write(message + "\n")
    return record.exit_code


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        budget = args.budget if args.budget is not None else budget_from_env()
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE

    session = Session(budget=budget, seed=args.seed)
    if args.command == "run":
        try:
            with open(args.file, "rb") as fh:
                text = fh.read()
        except OSError as exc:
            err.write(f"usage error: cannot read {args.file}: {exc.strerror}\n")
            return EXIT_USAGE
        return _emit(session.run_script(text, args.file), args.json, out, err)
    if args.command == "count-problem":
        return _emit(_count_problem(args.file, budget), args.json, out, err)

    try:
        cmd = _command_from_args(args)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        source = " ".join(getattr(args, a) for a in ("expr", "left", "right") if hasattr(args, a))
        record = OutputRecord(args.command, source)
        record.fail(EXIT_PARSE, f"parse error at {exc.line}:{exc.col}: {exc.message}")
        return _emit(record, args.json, out, err)
    return _emit(session.execute(cmd), args.json, out, err)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
