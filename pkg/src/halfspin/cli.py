"""Command line entry point: ``halfspin verify --config FILE``.

Exit codes: 0 all suites pass, 1 some suite fails, 2 passes with undecided
norm questions, 3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import SUITES, ConfigError, load_config
from .suites import FAIL, UNKNOWN, SuiteReport, run_suites

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN, EXIT_CONFIG = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors count as configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="halfspin", description="Exact verification of half-spin rationality scenarios.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run verification suites on a scenario config")
    v.add_argument("--config", required=True, metavar="FILE", help="JSON scenario file")
    v.add_argument("--suite", action="append", metavar="NAME", choices=[*SUITES, "all"],
                   help="suite to run (repeatable); overrides the config's list")
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="one JSON object per suite")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="human summary (default)")
    v.add_argument("--seed", type=int, help="seed for randomized trials (overrides config)")
    v.add_argument("--trials", type=int, help="number of randomized trials (overrides config)")
    v.add_argument("--timing", action="store_true", help="record elapsed milliseconds per suite")
    return p


def exit_code(reports: list[SuiteReport]) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return EXIT_FAIL
    if UNKNOWN in statuses:
        return EXIT_UNKNOWN
    return EXIT_OK


def format_text(r: SuiteReport) -> str:
    line = f"{r.suite:<12} {r.status.upper():<8} checks={r.checks_run}"
    if r.elapsed is not None:
        line += f" elapsed={r.elapsed:.1f}ms"
    if r.details:
        line += "  " + json.dumps(r.details, sort_keys=True)
    if r.counterexample:
        line += "\n    counterexample: " + json.dumps(r.counterexample, sort_keys=True)
    return line


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, suites=args.suite)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.trials is not None:
            if args.trials < 0:
                raise ConfigError("trials", "must be non-negative")
            cfg.trials = args.trials
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    reports = run_suites(cfg, timing=args.timing)
    for r in reports:
        print(r.dumps() if args.fmt == "json" else format_text(r), file=out)
    code = exit_code(reports)
    if args.fmt != "json":
        print({EXIT_OK: "all suites pass", EXIT_FAIL: "FAILURES", EXIT_UNKNOWN: "pass with unknowns"}[code],
              file=out)
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
