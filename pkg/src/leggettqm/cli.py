"""Command-line front end.

Exit status: 0 when every report is satisfied, 1 when any is violated, 2 on
bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import hvt, inequality
from .canonical import CanonicalState
from .errors import LeggettError
from .inequality import AverageTriple, InequalityReport, SweepRow
from .verify import run_checks

COLUMNS = (
    "delta",
    "av_a",
    "av_b",
    "av_ab_paper",
    "av_ab_oracle",
    "lower",
    "upper",
    "margin_lower",
    "margin_upper",
    "satisfied",
)

MODELS = ("malus",)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# row building


def _row(delta, av_a, av_b, paper, oracle, report: InequalityReport, satisfied: bool) -> dict:
    return {
        "delta": delta,
        "av_a": av_a,
        "av_b": av_b,
        "av_ab_paper": paper,
        "av_ab_oracle": oracle,
        "lower": report.lower,
        "upper": report.upper,
        "margin_lower": report.margin_lower,
        "margin_upper": report.margin_upper,
        "satisfied": satisfied,
    }


def sweep_row(r: SweepRow) -> dict:
    # bounds and margins are those of the closed-form value; satisfied covers both values
    return _row(r.delta, r.av_a, r.av_b, r.av_ab_paper, r.av_ab_oracle, r.report_paper, r.satisfied)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return format(float(value), ".17g")


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def to_json(rows: list[dict]) -> str:
    return json.dumps([{c: row[c] for c in COLUMNS} for row in rows], indent=2) + "\n"


# --------------------------------------------------------------------------
# commands


def _cmd_sweep(args) -> list[dict]:
    rows = inequality.quantum_sweep(
        CanonicalState(args.state), args.grid, theta_b=args.theta_b, tolerance=args.tolerance
    )
    return [sweep_row(r) for r in rows]


def _cmd_check(args) -> list[dict]:
    triple = AverageTriple(args.av_a, args.av_b, args.av_ab)
    report = inequality.leggett_check(triple, args.tolerance)
    return [_row(None, triple.av_a, triple.av_b, triple.av_ab, triple.av_ab, report, report.satisfied)]


def _cmd_hvt(args) -> list[dict]:
    model = hvt.malus_product_model(args.u, args.v)
    rows = []
    for k in range(args.grid):
        delta = 2 * math.pi * k / args.grid
        a, b = args.theta_b + delta, args.theta_b
        est = hvt.mc_averages(model, a, b, args.samples, args.seed, args.workers)
        tol = max(inequality.DEFAULT_TOLERANCE, 3 * est.max_stderr)
        report = inequality.leggett_check(est.triple, tol)
        exact = model.closed_form(a, b)
        # MC estimate goes in av_ab_paper, the exact value in av_ab_oracle
        rows.append(
            _row(delta, est.triple.av_a, est.triple.av_b, est.triple.av_ab, exact.av_ab, report, report.satisfied)
        )
    return rows


def _cmd_verify(args) -> int:
    results = run_checks()
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    n_ok = sum(results.values())
    print(f"{n_ok}/{len(results)} checks passed")
    return 0 if n_ok == len(results) else 1


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leggettqm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    out = _Parser(add_help=False)
    out.add_argument("--format", choices=("csv", "json"), default=None)
    out.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    out.add_argument("--tolerance", type=float, default=inequality.DEFAULT_TOLERANCE)

    angles = _Parser(add_help=False)
    angles.add_argument("--degrees", action="store_true", help="angles are given in degrees")
    angles.add_argument("--theta-b", type=float, default=0.0, help="absolute angle of analyzer B")

    p = sub.add_parser("sweep", parents=[out, angles], help="quantum sweep over relative angle")
    p.add_argument("--state", choices=[k.value for k in CanonicalState], required=True)
    p.add_argument("--grid", type=_positive_int, default=360)

    p = sub.add_parser("check", parents=[out], help="test one triple of averages")
    p.add_argument("--av-a", type=float, required=True)
    p.add_argument("--av-b", type=float, required=True)
    p.add_argument("--av-ab", type=float, required=True)

    p = sub.add_parser("hvt", parents=[out, angles], help="Monte Carlo hidden-variable model")
    p.add_argument("--model", choices=MODELS, default="malus")
    p.add_argument("--u", type=float, default=0.0, help="polarization of photon A")
    p.add_argument("--v", type=float, default=0.0, help="polarization of photon B")
    p.add_argument("--grid", type=_positive_int, default=36)
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=_positive_int, default=1)

    sub.add_parser("verify", help="run the exact-identity checks")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)

    if getattr(args, "degrees", False):
        for name in ("theta_b", "u", "v"):
            if hasattr(args, name):
                setattr(args, name, math.radians(getattr(args, name)))
    handlers = {"sweep": _cmd_sweep, "check": _cmd_check, "hvt": _cmd_hvt}
    try:
        rows = handlers[args.command](args)
    except LeggettError as exc:
        print(f"leggettqm {args.command}: error: {exc}", file=sys.stderr)
        return 2

    fmt = args.format or ("json" if args.command == "check" else "csv")
    text = to_json(rows) if fmt == "json" else to_csv(rows)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r["satisfied"] for r in rows) else 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
