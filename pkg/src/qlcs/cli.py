"""Command-line front end.

    qlcs lcs --x abab --y bbaa --mode gate --seed 7
    qlcs lps --x abaacbcbbca --mode abstract
    qlcs resources --problem lcs --n 16 --n 64 --format csv
    qlcs selftest

Exit codes: 0 success, 1 verification failure (a flagged false negative or
a failed self-test suite), 2 usage error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .driver import MODES, CapacityError, RunReport, lcs, lps
from .grover import SCHEDULES, GroverConfig
from .resources import PROBLEMS, SWEEP, estimate_resources, rows_to_csv
from .strings import Alphabet, InputError
from .verify import FAULTS, selftest

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
SEED_ENV = "QLCS_SEED"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlcs", description="Hybrid quantum LCS/LPS on a gate-level simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_options(p: argparse.ArgumentParser):
        p.add_argument("--alphabet", help="ordinary characters; defaults to the characters used")
        p.add_argument("--mode", choices=MODES, default="abstract")
        p.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV}, then 0")
        p.add_argument("--restarts", type=int, default=GroverConfig.restarts)
        p.add_argument("--shots", type=int, default=GroverConfig.shots)
        p.add_argument("--schedule", choices=SCHEDULES, default=GroverConfig.schedule)
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("lcs", help="longest common substring of two equal-length texts")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    run_options(p)

    p = sub.add_parser("lps", help="longest palindromic substring")
    p.add_argument("--x", required=True)
    run_options(p)

    p = sub.add_parser("resources", help="worst-case depth and gate counts, no simulation")
    p.add_argument("--problem", choices=PROBLEMS, default="lcs")
    p.add_argument("--n", type=int, action="append", help="padded size (repeatable); default 16..4096")
    p.add_argument("--width", type=int, default=2, help="qubits per symbol")
    p.add_argument("--restarts", type=int, default=GroverConfig.restarts)
    p.add_argument("--shots", type=int, default=GroverConfig.shots)
    p.add_argument("--schedule", choices=SCHEDULES, default=GroverConfig.schedule)
    p.add_argument("--output")
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")

    p = sub.add_parser("selftest", help="exhaustive oracle checks and the Grover closed form")
    p.add_argument("--inject-fault", choices=FAULTS, help="corrupt one operator to see a suite fail")
    p.add_argument("--output")
    return parser


def _seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"${SEED_ENV}={env!r} is not an integer") from None


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def report_text(report: RunReport) -> str:
    lines = [
        f"{report.problem} answer={report.answer} n={report.n} raw_len={report.raw_len} mode={report.mode}",
        f"witness x_pos={report.witness['x_pos']} y_pos={report.witness['y_pos']}",
    ]
    for it in report.iterations:
        flag = " FALSE-NEGATIVE" if it.false_negative else ""
        lines.append(f"  l={it.l} r={it.r} d={it.d} verified={int(it.verified)} restarts={it.restarts}{flag}")
    res = report.resources
    lines.append(f"qubits={res['qubits']} depth={res['depth']} oracle_calls={report.oracle_calls}")
    return "\n".join(lines) + "\n"


def _run(args) -> tuple[int, str]:
    cfg = GroverConfig(args.schedule, args.restarts, args.shots, _seed(args.seed))
    alphabet = Alphabet(args.alphabet) if args.alphabet else None
    if args.command == "lcs":
        report = lcs(args.x, args.y, cfg, args.mode, alphabet)
    else:
        report = lps(args.x, cfg, args.mode, alphabet)
    text = report.to_json() if args.format == "json" else report_text(report)
    failed = any(it.false_negative for it in report.iterations)
    return (EXIT_VERIFY if failed else EXIT_OK), text


def _resources(args) -> tuple[int, str]:
    cfg = GroverConfig(args.schedule, args.restarts, args.shots)
    rows = estimate_resources(args.n or list(SWEEP), args.problem, cfg, args.width)
    if args.format == "csv":
        return EXIT_OK, rows_to_csv(rows)
    if args.format == "json":
        return EXIT_OK, json.dumps([r.as_dict() for r in rows], indent=2) + "\n"
    text = "".join(f"n={r.n} qubits={r.qubits} depth={r.depth} ratio={r.ratio}\n" for r in rows)
    return EXIT_OK, text


def _selftest(args) -> tuple[int, str]:
    results = selftest(args.inject_fault)
    text = "".join(r.line() + "\n" for r in results)
    return (EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY), text


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"lcs": _run, "lps": _run, "resources": _resources, "selftest": _selftest}[args.command]
    try:
        code, text = handler(args)
    except CapacityError as exc:
        print(f"qlcs: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, ValueError) as exc:
        print(f"qlcs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, args.output)
    return code


def main() -> None:
    sys.exit(run_cli())
