"""Report documents shared by the CLI and the HTTP service.

Both fronts build reports here and serialize them through
:func:`greenval.io.emit_report`, so identical parameters produce
byte-identical bodies. Every report carries a run manifest (dataset hash,
parameters, seed, tool version) sufficient to reproduce it; reports never
embed timestamps.

Money is rounded to two decimals and ratios to six at this boundary;
internal computation stays at full double precision.
"""

from __future__ import annotations

from typing import Any, Literal, Mapping, Sequence

from . import __version__
from .errors import DomainError
from .io import CaseStudyDocument, ValidationReport, dataset_sha256
from .scenario import (
    ComparisonReport,
    KpiReport,
    Overrides,
    WaterBounds,
    apply_overrides,
    compare_case,
    evaluate_scenario,
)
from .sensitivity import (
    ForecastBand,
    ParameterSpec,
    UncertaintySpec,
    forecast_npv,
    sweep,
)

RoiBase = Literal["total", "capex"]


def _money(value: float | None) -> float | None:
    return None if value is None else round(value, 2)


def _ratio(value: float | None) -> float | None:
    return None if value is None else round(value, 6)


def _overrides_dict(overrides: Overrides) -> dict[str, Any]:
    return {
        "discount_rate": overrides.discount_rate,
        "water_volume": overrides.water_volume,
        "carbon_price": overrides.carbon_price,
        "water_price": overrides.water_price,
        "item_amounts": {k: overrides.item_amounts[k] for k in sorted(overrides.item_amounts)},
    }


def build_manifest(doc: CaseStudyDocument, command: str, parameters: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "tool": "greenval",
        "version": __version__,
        "dataset_id": doc.id,
        "dataset_sha256": dataset_sha256(doc),
        "command": command,
        "parameters": dict(parameters),
    }


def kpi_to_dict(report: KpiReport) -> dict[str, Any]:
    return {
        "scenario_id": report.scenario_id,
        "label": report.label,
        "role": report.role,
        "area_m2": report.area_m2,
        "pv_costs": _money(report.pv_costs),
        "pv_benefits": _money(report.pv_benefits),
        "npv": _money(report.npv),
        "bcr": _ratio(report.bcr),
        "roi": _ratio(report.roi),
        "cost_per_m2": _money(report.cost_per_m2),
        "npv_per_m2": _money(report.npv_per_m2),
        "deviations": [
            {
                "metric": d.metric,
                "computed": _ratio(d.computed) if d.metric in ("bcr", "roi") else _money(d.computed),
                "reported": _ratio(d.reported) if d.metric in ("bcr", "roi") else _money(d.reported),
                "relative_gap": _ratio(d.relative_gap),
                "within_tolerance": d.within_tolerance,
            }
            for d in report.deviations
        ],
    }


def _prepared(doc: CaseStudyDocument, overrides: Overrides):
    ctx, scenarios = apply_overrides(doc.conversion_context, list(doc.scenarios), overrides)
    baseline = next(s for s in scenarios if s.role == "baseline")
    alternative = next(s for s in scenarios if s.role == "alternative")
    return ctx, baseline, alternative


def build_evaluate_report(
    doc: CaseStudyDocument,
    overrides: Overrides = Overrides(),
    *,
    roi_base: RoiBase = "total",
) -> dict[str, Any]:
    """KPI reports for both scenarios under the given overrides."""
    ctx, baseline, alternative = _prepared(doc, overrides)
    reports = [
        evaluate_scenario(s, ctx, water_volume=overrides.water_volume, roi_base=roi_base)
        for s in (baseline, alternative)
    ]
    return {
        "kind": "evaluate",
        "dataset": doc.id,
        "manifest": build_manifest(
            doc, "evaluate", {"overrides": _overrides_dict(overrides), "roi_base": roi_base}
        ),
        "scenarios": [kpi_to_dict(r) for r in reports],
    }


def build_compare_report(
    doc: CaseStudyDocument,
    overrides: Overrides = Overrides(),
    *,
    roi_base: RoiBase = "total",
) -> dict[str, Any]:
    ctx, baseline, alternative = _prepared(doc, overrides)
    comparison: ComparisonReport = compare_case(
        baseline, alternative, ctx, water_volume=overrides.water_volume, roi_base=roi_base
    )
    return {
        "kind": "compare",
        "dataset": doc.id,
        "manifest": build_manifest(
            doc, "compare", {"overrides": _overrides_dict(overrides), "roi_base": roi_base}
        ),
        "scenarios": [kpi_to_dict(r) for r in comparison.reports],
        "recommended": comparison.recommended,
        "notes": list(comparison.notes),
    }


def build_sweep_report(
    doc: CaseStudyDocument,
    specs: Sequence[ParameterSpec],
    overrides: Overrides = Overrides(),
    *,
    roi_base: RoiBase = "total",
) -> dict[str, Any]:
    ctx, baseline, alternative = _prepared(doc, overrides)
    cells = sweep(
        baseline,
        alternative,
        ctx,
        specs,
        roi_base=roi_base,
        default_water_volume=overrides.water_volume,
    )
    return {
        "kind": "sweep",
        "dataset": doc.id,
        "manifest": build_manifest(
            doc,
            "sweep",
            {
                "overrides": _overrides_dict(overrides),
                "roi_base": roi_base,
                "params": [{"target": s.target, "values": list(s.values)} for s in specs],
            },
        ),
        "params": [{"target": s.target, "values": list(s.values)} for s in specs],
        "cells": [
            {
                "values": cell.values,
                "scenarios": [kpi_to_dict(r) for r in cell.reports],
            }
            for cell in cells
        ],
    }


def build_forecast_report(
    doc: CaseStudyDocument,
    scenario_id: str | None = None,
    overrides: Overrides = Overrides(),
    *,
    horizon: int = 30,
    uncertainty: UncertaintySpec = UncertaintySpec(),
    mode: str = "horizon-dcf",
) -> dict[str, Any]:
    """Forecast the cumulative NPV band for one scenario.

    Without an explicit scenario id, the scenario carrying water bounds is
    forecast (each bundled case has exactly one); a water-volume override
    collapses the sampled range to that single volume.
    """
    ctx, baseline, alternative = _prepared(doc, overrides)
    scenarios = {s.id: s for s in (baseline, alternative)}
    if scenario_id is None:
        with_bounds = [s for s in (baseline, alternative) if s.annual_water_m3 is not None]
        target = with_bounds[0] if with_bounds else baseline
    else:
        if scenario_id not in scenarios:
            raise DomainError(f"unknown scenario id {scenario_id!r}")
        target = scenarios[scenario_id]

    bounds = None
    if overrides.water_volume is not None:
        v = overrides.water_volume
        bounds = WaterBounds(v, v, v)

    band: ForecastBand = forecast_npv(target, ctx, horizon, uncertainty, mode=mode, bounds=bounds)
    return {
        "kind": "forecast",
        "dataset": doc.id,
        "scenario_id": target.id,
        "manifest": build_manifest(
            doc,
            "forecast",
            {
                "overrides": _overrides_dict(overrides),
                "scenario_id": target.id,
                "horizon": horizon,
                "samples": uncertainty.samples,
                "seed": uncertainty.seed,
                "distribution": uncertainty.distribution,
                "mode": mode,
            },
        ),
        "mode": band.mode,
        "horizon": horizon,
        "years": list(band.years),
        "mean": [_money(x) for x in band.mean],
        "lower95": [_money(x) for x in band.lower95],
        "upper95": [_money(x) for x in band.upper95],
    }


def build_validate_report(doc: CaseStudyDocument, validation: ValidationReport) -> dict[str, Any]:
    return {
        "kind": "validate",
        "dataset": doc.id,
        "manifest": build_manifest(doc, "validate", {}),
        "item_checks": [
            {
                "scenario_id": c.scenario_id,
                "item_id": c.item_id,
                "computed": _money(c.computed),
                "reported": _money(c.reported),
                "relative_gap": _ratio(c.relative_gap),
                "within_tolerance": c.within_tolerance,
            }
            for c in validation.item_checks
        ],
        "basis_checks": [
            {
                "scenario_id": c.scenario_id,
                "item_id": c.item_id,
                "stored": _money(c.stored),
                "computed": _money(c.computed),
                "relative_gap": _ratio(c.relative_gap),
                "registered": c.registered,
            }
            for c in validation.basis_checks
        ],
        "warnings": list(validation.warnings),
    }
