"""Command-line interface.

Usage
-----
    greenval evaluate sicily.json --discount-rate 0.05 --format json
    greenval compare emilia-romagna
    greenval sweep sicily --param discount_rate=0.025,0.05,0.075
    greenval forecast sicily --samples 10000 --seed 7 --output band.csv
    greenval validate emilia-romagna
    greenval serve --port 8080

The dataset argument is a file path or a bundled id. Reports go to stdout
unless --output is given, in which case a matching figure is rendered
next to the report (disable with --no-plot).

Exit codes: 0 success, 1 validation/domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import DatasetError, GreenvalError
from .io import BUNDLED_IDS, VARIANT_IDS, CaseStudyDocument, emit_report, load_bundled, load_case_study, validate_document
from .reports import (
    build_compare_report,
    build_evaluate_report,
    build_forecast_report,
    build_sweep_report,
    build_validate_report,
)
from .scenario import Overrides
from .sensitivity import ParameterSpec, UncertaintySpec

DEFAULT_PORT = 8080


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dataset", help="dataset file path or bundled id (sicily, emilia-romagna)")
    parser.add_argument("--discount-rate", type=float, default=None, help="override the discount rate")
    parser.add_argument("--water-volume", type=float, default=None, help="override the annual output water (m3/yr)")
    parser.add_argument("--carbon-price", type=float, default=None, help="override the carbon price (EUR/t)")
    parser.add_argument("--water-price", type=float, default=None, help="override the water reuse price (EUR/m3)")
    parser.add_argument(
        "--set",
        dest="item_amounts",
        action="append",
        default=[],
        metavar="ITEM=AMOUNT",
        help="pin one item's raw amount (repeatable)",
    )
    parser.add_argument("--roi-base", choices=("total", "capex"), default="total", help="ROI investment base")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    parser.add_argument("--output", metavar="PATH", default=None, help="write the report to a file instead of stdout")
    parser.add_argument("--no-plot", action="store_true", help="skip rendering a figure next to --output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greenval", description="Green-infrastructure cost-benefit evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("evaluate", "KPI reports for both scenarios"),
        ("compare", "compare baseline and alternative, recommend the NPV maximizer"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_options(p)

    p = sub.add_parser("sweep", help="evaluate a parameter grid")
    _add_common_options(p)
    p.add_argument(
        "--param",
        dest="params",
        action="append",
        default=[],
        metavar="TARGET=V1,V2,... | TARGET=LOW:HIGH:STEPS",
        help="swept parameter (repeatable); targets: discount_rate, water_volume, carbon_price, "
        "water_price, item:<id>",
    )

    p = sub.add_parser("forecast", help="30-year cumulative NPV band under water uncertainty")
    _add_common_options(p)
    p.add_argument("--scenario", default=None, help="scenario id (default: the one with water bounds)")
    p.add_argument("--horizon", type=int, default=30, help="forecast horizon in years")
    p.add_argument("--samples", type=int, default=1000, help="Monte Carlo samples")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--mode", choices=("annualized", "horizon-dcf"), default="horizon-dcf")
    p.add_argument("--distribution", choices=("uniform", "triangular"), default="uniform")

    p = sub.add_parser("validate", help="check a dataset against its transcription and chains")
    p.add_argument("dataset")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", metavar="PATH", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"port (default: $GREENVAL_PORT or {DEFAULT_PORT})",
    )
    return parser


def _load_dataset(ref: str) -> CaseStudyDocument:
    path = Path(ref)
    if path.exists():
        return load_case_study(path.read_bytes())
    if ref in BUNDLED_IDS + VARIANT_IDS:
        return load_bundled(ref)
    raise DatasetError(f"dataset not found: {ref!r} is neither a readable file nor a bundled id")


def _parse_overrides(args: argparse.Namespace) -> Overrides:
    item_amounts = {}
    for assignment in args.item_amounts:
        item_id, sep, amount = assignment.partition("=")
        if not sep or not item_id:
            raise GreenvalError(f"--set expects ITEM=AMOUNT, got {assignment!r}")
        try:
            item_amounts[item_id] = float(amount)
        except ValueError as exc:
            raise GreenvalError(f"--set {assignment!r}: amount is not a number") from exc
    return Overrides(
        discount_rate=args.discount_rate,
        water_volume=args.water_volume,
        carbon_price=args.carbon_price,
        water_price=args.water_price,
        item_amounts=item_amounts,
    )


def _parse_param(assignment: str) -> ParameterSpec:
    target, sep, spec = assignment.partition("=")
    if not sep or not target or not spec:
        raise GreenvalError(f"--param expects TARGET=VALUES, got {assignment!r}")
    try:
        if ":" in spec:
            low, high, steps = spec.split(":")
            return ParameterSpec.from_range(target, float(low), float(high), int(steps))
        return ParameterSpec(target, tuple(float(v) for v in spec.split(",")))
    except ValueError as exc:
        raise GreenvalError(f"--param {assignment!r}: {exc}") from exc


def _write_report(report: dict, args: argparse.Namespace) -> None:
    data = emit_report(report, args.format)
    if args.output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    out_path = Path(args.output)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(data)
    if not getattr(args, "no_plot", False):
        from .plots import render_report_figure

        figure_path = out_path.with_suffix(".png")
        render_report_figure(report, figure_path)


def _run(args: argparse.Namespace) -> int:
    if args.command == "serve":
        from .service import run_server

        port = args.port
        if port is None:
            port = int(os.environ.get("GREENVAL_PORT", DEFAULT_PORT))
        run_server(host=args.host, port=port)
        return 0

    doc = _load_dataset(args.dataset)

    if args.command == "validate":
        validation = validate_document(doc)
        report = build_validate_report(doc, validation)
        _write_report(report, args)
        return 0

    overrides = _parse_overrides(args)
    if args.command == "evaluate":
        report = build_evaluate_report(doc, overrides, roi_base=args.roi_base)
    elif args.command == "compare":
        report = build_compare_report(doc, overrides, roi_base=args.roi_base)
    elif args.command == "sweep":
        if not args.params:
            raise GreenvalError("sweep requires at least one --param")
        specs = [_parse_param(p) for p in args.params]
        report = build_sweep_report(doc, specs, overrides, roi_base=args.roi_base)
    elif args.command == "forecast":
        uncertainty = UncertaintySpec(distribution=args.distribution, samples=args.samples, seed=args.seed)
        report = build_forecast_report(
            doc,
            args.scenario,
            overrides,
            horizon=args.horizon,
            uncertainty=uncertainty,
            mode=args.mode,
        )
    else:  # pragma: no cover - argparse restricts the choices
        raise GreenvalError(f"unknown command {args.command!r}")

    _write_report(report, args)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except GreenvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
