"""Command-line front end: ``analyze``, ``family`` and ``verify-paper``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classify import ClassifierConfig
from .errors import BudgetExceeded, FamilyParameterError, HypergraphError, InternalConsistencyError
from .families import FAMILY_NAMES, build_family
from .graph import parse_graph
from .report import analyze_graph, format_analysis_text, format_claims_text, verify_claims
from .symmetry import DEFAULT_SEARCH_NODES

BUDGET_ENV = "HYPERGRAPHX_BUDGET"

EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_SEARCH_NODES
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(f"error: {BUDGET_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise SystemExit(f"error: {BUDGET_ENV} must be positive")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rules", choices=("paper", "extended"), default="extended",
                        help="paper: published invariants and gluing only; extended: add conjectured ones")
    common.add_argument("--kappa", action="store_true", help="brute-force k-od core numbers (slow)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--budget", type=_positive, default=None,
                        help=f"search node cap (default {DEFAULT_SEARCH_NODES}, or ${BUDGET_ENV})")

    parser = argparse.ArgumentParser(prog="hypergraphx", description="Hyperspace invariants of finite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze a graph file ('-' for stdin)")
    p.add_argument("file")

    p = sub.add_parser("family", help="print a named family member in the graph text format")
    p.add_argument("name", help=f"one of {', '.join(FAMILY_NAMES)}")
    p.add_argument("n", nargs="?", type=int)

    sub.add_parser("verify-paper", parents=[common], help="check the published numeric claims")
    return parser


def _config(args) -> ClassifierConfig:
    budget = args.budget if args.budget is not None else _default_budget()
    return ClassifierConfig(rules=args.rules, kappa=args.kappa, budget=budget)


def _emit(data: dict, fmt: str, text_formatter) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text_formatter(data))


def cmd_analyze(args) -> int:
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = parse_graph(text)
    except HypergraphError as exc:
        print(f"error: {args.file}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = analyze_graph(g, _config(args))
    _emit(report, args.format, format_analysis_text)
    return 0


def cmd_family(args) -> int:
    try:
        fg = build_family(args.name, args.n)
    except FamilyParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(fg.serialize())
    return 0


def cmd_verify_paper(args) -> int:
    table = verify_claims(_config(args))
    _emit(table, args.format, format_claims_text)
    return EXIT_INTERNAL if table["internal_errors"] else 0


COMMANDS = {"analyze": cmd_analyze, "family": cmd_family, "verify-paper": cmd_verify_paper}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
