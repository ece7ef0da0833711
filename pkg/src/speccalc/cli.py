"""Command surface.

    speccalc verify <kind> --config FILE [--seed N] [--out report.json]
                                         [--csv curves.csv]
    speccalc suite --config FILE [--seed N] [--out ...] [--csv ...]

The environment variable SPECCALC_QUAD_TOL overrides the quadrature
tolerance.  Exit status: 0 iff every executed check passed; 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import CHECK_KINDS, load_config
from .errors import ConfigError
from .suite import emit_convergence_csv, emit_report_json, run_suite


def _add_common(parser):
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--out", default=None, help="write report JSON here")
    parser.add_argument("--csv", default=None,
                        help="write convergence curves CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speccalc",
        description="Verify operator integral identities at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run checks of one kind")
    verify.add_argument("kind", choices=CHECK_KINDS)
    _add_common(verify)

    suite = sub.add_parser("suite", help="run every configured check")
    _add_common(suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    quad_override = None
    env = os.environ.get("SPECCALC_QUAD_TOL")
    if env:
        try:
            quad_override = float(env)
        except ValueError:
            print(f"speccalc: SPECCALC_QUAD_TOL={env!r} is not a number",
                  file=sys.stderr)
            return 2
    try:
        config = load_config(args.config, quad_tol_override=quad_override)
        if args.seed is not None:
            from .config import SuiteConfig
            config = SuiteConfig(int(args.seed), config.quad, config.checks,
                                 config.raw)
        kinds = [args.kind] if args.command == "verify" else None
        report = run_suite(config, kinds=kinds)
    except ConfigError as exc:
        print(f"speccalc: config error: {exc}", file=sys.stderr)
        return 2
    for record in report.checks:
        status = "PASS" if record.get("pass") else "FAIL"
        detail = record.get("error", "")
        residual = record.get("global_residual")
        if residual is not None and not detail:
            detail = f"residual={residual}"
        print(f"[{status}] {record['name']} ({record['kind']}) {detail}")
    if args.out:
        emit_report_json(report, args.out)
    if args.csv:
        emit_convergence_csv(report, args.csv)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
