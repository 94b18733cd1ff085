"""Case-study document loading, validation and report serialization.

Datasets are JSON documents with an explicit ``schema_version``. Money is
serialized as decimal strings so files stay diffable and free of binary
float drift; everything is parsed into doubles for computation.

Loading is eager: the returned document has every invariant checked
(exactly one baseline and one alternative, unique item ids, every
referenced rebase factor present). Distinct error classes let callers map
problems to exit codes or HTTP statuses without string matching.
"""

from __future__ import annotations

import csv
import hashlib
import io as _stringio
import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from typing import Any, Mapping

from .errors import (
    DatasetParseError,
    DomainError,
    DuplicateItemIdError,
    MissingRebaseFactorError,
    SchemaError,
)
from .ledger import (
    CashFlowItem,
    DiscountModel,
    EmissionBasis,
    TimingProfile,
    UnitRateBasis,
    annualized_value,
)
from .monetize import ConversionContext, emission_cost
from .scenario import DEVIATION_TOLERANCE, Scenario, WaterBounds, effective_amount, resolved_items

SUPPORTED_SCHEMA_VERSIONS = ("1.0",)

# Datasets listed by the service and CLI by default. The aesthetic-value
# variant ships alongside but is loaded explicitly by id or path.
BUNDLED_IDS = ("sicily", "emilia-romagna")
VARIANT_IDS = ("sicily-aesthetic",)

_TIMING_YEAR_KEYS = {
    "one_off_annualized": "lifespan_years",
    "recurring_deferred": "offset_years",
    "periodic_averaged": "period_years",
}


@dataclass(frozen=True)
class AppendixEntry:
    """A known, documented gap between a stored amount and its chain."""

    scenario_id: str
    item_id: str
    field: str
    computed: float
    stored: float
    note: str = ""


@dataclass(frozen=True)
class CaseStudyDocument:
    schema_version: str
    id: str
    metadata: Mapping[str, Any]
    conversion_context: ConversionContext
    scenarios: tuple[Scenario, Scenario]
    deviation_appendix: tuple[AppendixEntry, ...] = ()

    @property
    def baseline(self) -> Scenario:
        return next(s for s in self.scenarios if s.role == "baseline")

    @property
    def alternative(self) -> Scenario:
        return next(s for s in self.scenarios if s.role == "alternative")


@dataclass(frozen=True)
class ItemCheck:
    scenario_id: str
    item_id: str
    computed: float
    reported: float
    relative_gap: float
    within_tolerance: bool


@dataclass(frozen=True)
class BasisCheck:
    scenario_id: str
    item_id: str
    stored: float
    computed: float
    relative_gap: float
    registered: bool


@dataclass(frozen=True)
class ValidationReport:
    dataset_id: str
    item_checks: tuple[ItemCheck, ...]
    basis_checks: tuple[BasisCheck, ...]
    warnings: tuple[str, ...]


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _require(mapping: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in mapping:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _money(value: Any, where: str) -> float:
    """Parse a money value serialized as a decimal string."""
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise SchemaError(f"{where}: expected a decimal string, got {value!r}")
    try:
        return float(Decimal(str(value)))
    except InvalidOperation as exc:
        raise SchemaError(f"{where}: not a decimal amount: {value!r}") from exc


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _parse_timing(raw: Any, where: str) -> TimingProfile:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{where}: timing must be an object")
    variant = _require(raw, "variant", where)
    year_key = _TIMING_YEAR_KEYS.get(variant)
    try:
        if year_key is None and variant == "recurring_immediate":
            return TimingProfile(variant)
        if year_key is None:
            raise DomainError(f"unknown timing variant: {variant!r}")
        return TimingProfile(variant, _integer(_require(raw, year_key, where), f"{where}.{year_key}"))
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_basis(raw: Any, where: str) -> UnitRateBasis | EmissionBasis:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{where}: basis must be an object")
    basis_type = _require(raw, "type", where)
    try:
        if basis_type == "unit_rate":
            return UnitRateBasis(
                value=_money(_require(raw, "value", where), f"{where}.value"),
                unit=_require(raw, "unit", where),
                currency=_require(raw, "currency", where),
                price_year=_integer(_require(raw, "price_year", where), f"{where}.price_year"),
                quantity=_number(_require(raw, "quantity", where), f"{where}.quantity"),
            )
        if basis_type == "emission":
            return EmissionBasis(
                excavated_volume_m3=_number(
                    _require(raw, "excavated_volume_m3", where), f"{where}.excavated_volume_m3"
                ),
                priced_at_eur_per_tonne=_money(
                    raw.get("priced_at_eur_per_tonne", "60"), f"{where}.priced_at_eur_per_tonne"
                ),
            )
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: unknown basis type {basis_type!r}")


def _parse_item(raw: Any, where: str) -> CashFlowItem:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{where}: item must be an object")
    item_id = _require(raw, "id", where)
    where = f"{where}[{item_id}]"
    reported = raw.get("reported_value_2019")
    basis = raw.get("basis")
    try:
        return CashFlowItem(
            id=item_id,
            kind=_require(raw, "kind", where),
            category=_require(raw, "category", where),
            raw_amount=_money(_require(raw, "raw_amount", where), f"{where}.raw_amount"),
            timing=_parse_timing(_require(raw, "timing", where), f"{where}.timing"),
            provenance=raw.get("provenance", ""),
            reported_value_2019=None if reported is None else _money(reported, f"{where}.reported_value_2019"),
            scales_with_water=bool(raw.get("scales_with_water", False)),
            basis=None if basis is None else _parse_basis(basis, f"{where}.basis"),
            basis_mode=raw.get("basis_mode", "reference"),
        )
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_scenario(raw: Any, where: str) -> Scenario:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{where}: scenario must be an object")
    scenario_id = _require(raw, "id", where)
    where = f"{where}[{scenario_id}]"
    items_raw = _require(raw, "items", where)
    if not isinstance(items_raw, list):
        raise SchemaError(f"{where}: items must be a list")
    items = tuple(_parse_item(item, f"{where}.items") for item in items_raw)

    seen: set[str] = set()
    for item in items:
        if item.id in seen:
            raise DuplicateItemIdError(f"{where}: duplicate item id {item.id!r}")
        seen.add(item.id)

    water_raw = raw.get("annual_water_m3")
    water = None
    reported_raw = raw.get("reported_aggregates", {})
    if not isinstance(reported_raw, Mapping):
        raise SchemaError(f"{where}: reported_aggregates must be an object")
    reported = {}
    for metric, value in reported_raw.items():
        if metric in ("bcr", "roi"):
            reported[metric] = _number(value, f"{where}.reported_aggregates.{metric}")
        else:
            reported[metric] = _money(value, f"{where}.reported_aggregates.{metric}")
    if water_raw is not None and not isinstance(water_raw, Mapping):
        raise SchemaError(f"{where}: annual_water_m3 must be an object")
    try:
        if water_raw is not None:
            water = WaterBounds(
                min=_number(_require(water_raw, "min", where), f"{where}.annual_water_m3.min"),
                nominal=_number(_require(water_raw, "nominal", where), f"{where}.annual_water_m3.nominal"),
                max=_number(_require(water_raw, "max", where), f"{where}.annual_water_m3.max"),
            )
        return Scenario(
            id=scenario_id,
            label=_require(raw, "label", where),
            role=_require(raw, "role", where),
            items=items,
            area_m2=_number(_require(raw, "area_m2", where), f"{where}.area_m2"),
            lifespan_years=_integer(_require(raw, "lifespan_years", where), f"{where}.lifespan_years"),
            annual_water_m3=water,
            reported_aggregates=reported,
        )
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_context(raw: Any, where: str) -> ConversionContext:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{where}: conversion_context must be an object")
    factors_raw = _require(raw, "rebase_factors", where)
    if not isinstance(factors_raw, Mapping):
        raise SchemaError(f"{where}: rebase_factors must be an object")
    factors: dict[tuple[str, int], float] = {}
    for key, value in factors_raw.items():
        currency, _, year = key.partition("/")
        if not currency or not year.isdigit():
            raise SchemaError(f"{where}: rebase factor keys must look like 'EUR/2019', got {key!r}")
        factors[(currency, int(year))] = _money(value, f"{where}.rebase_factors[{key}]")
    discount_raw = _require(raw, "discount", where)
    try:
        return ConversionContext(
            base_currency=_require(raw, "base_currency", where),
            base_year=_integer(_require(raw, "base_year", where), f"{where}.base_year"),
            rebase_factors=factors,
            carbon_price_eur_per_tonne=_money(
                _require(raw, "carbon_price_eur_per_tonne", where), f"{where}.carbon_price_eur_per_tonne"
            ),
            excavation_emission_factor_kg_per_m3=_number(
                _require(raw, "excavation_emission_factor_kg_per_m3", where),
                f"{where}.excavation_emission_factor_kg_per_m3",
            ),
            discount=DiscountModel(
                rate=_number(_require(discount_raw, "rate", where), f"{where}.discount.rate"),
                base_year=_integer(_require(discount_raw, "base_year", where), f"{where}.discount.base_year"),
            ),
            lifespan_years=_integer(_require(raw, "lifespan_years", where), f"{where}.lifespan_years"),
        )
    except DomainError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def load_case_study(document: bytes | str) -> CaseStudyDocument:
    """Parse and fully validate a case-study document.

    Raises
    ------
    DatasetParseError
        On malformed JSON, with line/column position.
    SchemaError
        On structural or domain violations.
    DuplicateItemIdError, MissingRebaseFactorError
        On their specific conditions.
    """
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(exc.msg, exc.lineno, exc.colno) from exc
    return case_study_from_dict(raw)


def case_study_from_dict(raw: Any) -> CaseStudyDocument:
    if not isinstance(raw, Mapping):
        raise SchemaError("dataset: top level must be an object")
    version = _require(raw, "schema_version", "dataset")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise SchemaError(f"dataset: unsupported schema_version {version!r}")
    dataset_id = _require(raw, "id", "dataset")
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, Mapping):
        raise SchemaError("dataset: metadata must be an object")
    ctx = _parse_context(_require(raw, "conversion_context", "dataset"), "conversion_context")

    scenarios_raw = _require(raw, "scenarios", "dataset")
    if not isinstance(scenarios_raw, list) or len(scenarios_raw) != 2:
        raise SchemaError("dataset: scenarios must be a list of exactly two entries")
    scenarios = tuple(_parse_scenario(s, "scenarios") for s in scenarios_raw)
    roles = sorted(s.role for s in scenarios)
    if roles != ["alternative", "baseline"]:
        raise SchemaError("dataset: scenarios must contain exactly one baseline and one alternative")

    appendix_raw = raw.get("deviation_appendix", [])
    if not isinstance(appendix_raw, list):
        raise SchemaError("dataset: deviation_appendix must be a list")
    appendix = tuple(
        AppendixEntry(
            scenario_id=_require(entry, "scenario_id", "deviation_appendix"),
            item_id=_require(entry, "item_id", "deviation_appendix"),
            field=_require(entry, "field", "deviation_appendix"),
            computed=_money(_require(entry, "computed", "deviation_appendix"), "deviation_appendix.computed"),
            stored=_money(_require(entry, "stored", "deviation_appendix"), "deviation_appendix.stored"),
            note=entry.get("note", ""),
        )
        for entry in appendix_raw
    )

    doc = CaseStudyDocument(
        schema_version=version,
        id=dataset_id,
        metadata=dict(metadata),
        conversion_context=ctx,
        scenarios=scenarios,  # type: ignore[arg-type]
        deviation_appendix=appendix,
    )
    _check_factor_references(doc)
    return doc


def _check_factor_references(doc: CaseStudyDocument) -> None:
    """Every (currency, year) referenced by an item basis must resolve."""
    ctx = doc.conversion_context
    for scenario in doc.scenarios:
        for item in scenario.items:
            basis = item.basis
            if isinstance(basis, UnitRateBasis):
                if (basis.currency, basis.price_year) not in ctx.rebase_factors:
                    raise MissingRebaseFactorError(basis.currency, basis.price_year)
                if basis.price_year > ctx.base_year:
                    raise SchemaError(
                        f"item {item.id!r}: price year {basis.price_year} is after base year {ctx.base_year}"
                    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _money_str(value: float) -> str:
    return repr(float(value))


def _timing_to_dict(timing: TimingProfile) -> dict[str, Any]:
    out: dict[str, Any] = {"variant": timing.variant}
    year_key = _TIMING_YEAR_KEYS.get(timing.variant)
    if year_key is not None:
        out[year_key] = timing.years
    return out


def _basis_to_dict(basis: UnitRateBasis | EmissionBasis) -> dict[str, Any]:
    if isinstance(basis, UnitRateBasis):
        return {
            "type": "unit_rate",
            "value": _money_str(basis.value),
            "unit": basis.unit,
            "currency": basis.currency,
            "price_year": basis.price_year,
            "quantity": basis.quantity,
        }
    return {
        "type": "emission",
        "excavated_volume_m3": basis.excavated_volume_m3,
        "priced_at_eur_per_tonne": _money_str(basis.priced_at_eur_per_tonne),
    }


def case_study_to_dict(doc: CaseStudyDocument) -> dict[str, Any]:
    """Dataset document as a JSON-ready dict (money as decimal strings)."""
    ctx = doc.conversion_context
    scenarios = []
    for scenario in doc.scenarios:
        items = []
        for item in scenario.items:
            entry: dict[str, Any] = {
                "id": item.id,
                "kind": item.kind,
                "category": item.category,
                "raw_amount": _money_str(item.raw_amount),
                "timing": _timing_to_dict(item.timing),
                "provenance": item.provenance,
            }
            if item.reported_value_2019 is not None:
                entry["reported_value_2019"] = _money_str(item.reported_value_2019)
            if item.scales_with_water:
                entry["scales_with_water"] = True
            if item.basis is not None:
                entry["basis"] = _basis_to_dict(item.basis)
                entry["basis_mode"] = item.basis_mode
            items.append(entry)
        s_entry: dict[str, Any] = {
            "id": scenario.id,
            "label": scenario.label,
            "role": scenario.role,
            "area_m2": scenario.area_m2,
            "lifespan_years": scenario.lifespan_years,
            "items": items,
        }
        if scenario.annual_water_m3 is not None:
            bounds = scenario.annual_water_m3
            s_entry["annual_water_m3"] = {"min": bounds.min, "nominal": bounds.nominal, "max": bounds.max}
        if scenario.reported_aggregates:
            s_entry["reported_aggregates"] = {
                metric: (value if metric in ("bcr", "roi") else _money_str(value))
                for metric, value in scenario.reported_aggregates.items()
            }
        scenarios.append(s_entry)

    out: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "id": doc.id,
        "metadata": dict(doc.metadata),
        "conversion_context": {
            "base_currency": ctx.base_currency,
            "base_year": ctx.base_year,
            "rebase_factors": {
                f"{currency}/{year}": _money_str(factor)
                for (currency, year), factor in sorted(ctx.rebase_factors.items())
            },
            "carbon_price_eur_per_tonne": _money_str(ctx.carbon_price_eur_per_tonne),
            "excavation_emission_factor_kg_per_m3": ctx.excavation_emission_factor_kg_per_m3,
            "discount": {"rate": ctx.discount.rate, "base_year": ctx.discount.base_year},
            "lifespan_years": ctx.lifespan_years,
        },
        "scenarios": scenarios,
    }
    if doc.deviation_appendix:
        out["deviation_appendix"] = [
            {
                "scenario_id": entry.scenario_id,
                "item_id": entry.item_id,
                "field": entry.field,
                "computed": _money_str(entry.computed),
                "stored": _money_str(entry.stored),
                "note": entry.note,
            }
            for entry in doc.deviation_appendix
        ]
    return out


def canonical_json_bytes(obj: Any) -> bytes:
    """Stable JSON encoding: sorted keys, two-space indent, UTF-8, newline."""
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n").encode("utf-8")


def emit_case_study(doc: CaseStudyDocument) -> bytes:
    return canonical_json_bytes(case_study_to_dict(doc))


def dataset_sha256(doc: CaseStudyDocument) -> str:
    """Content hash of the canonical serialization (whitespace-insensitive)."""
    return hashlib.sha256(emit_case_study(doc)).hexdigest()


# ---------------------------------------------------------------------------
# Bundled datasets
# ---------------------------------------------------------------------------


def _bundled_filename(dataset_id: str) -> str:
    return f"{dataset_id}.json"


def load_bundled(dataset_id: str) -> CaseStudyDocument:
    """Load one of the datasets shipped inside the package."""
    if dataset_id not in BUNDLED_IDS + VARIANT_IDS:
        raise SchemaError(f"unknown bundled dataset: {dataset_id!r}")
    data = resources.files("greenval").joinpath("datasets").joinpath(_bundled_filename(dataset_id)).read_bytes()
    return load_case_study(data)


def load_registry() -> dict[str, CaseStudyDocument]:
    """The default dataset registry served over HTTP, in listing order."""
    return {dataset_id: load_bundled(dataset_id) for dataset_id in BUNDLED_IDS}


# ---------------------------------------------------------------------------
# Validation report
# ---------------------------------------------------------------------------


def validate_document(doc: CaseStudyDocument) -> ValidationReport:
    """Recompute per-item values and monetization chains against the file.

    Two kinds of checks run per item: the stored amounts against the
    printed per-year values they transcribe, and stored amounts against
    their monetization bases. A basis gap above the tolerance must be
    registered in the dataset's deviation appendix, otherwise it becomes a
    warning; an appendix entry that no longer matches recomputation also
    warns.
    """
    ctx = doc.conversion_context
    registered = {(entry.scenario_id, entry.item_id): entry for entry in doc.deviation_appendix}
    item_checks: list[ItemCheck] = []
    basis_checks: list[BasisCheck] = []
    warnings: list[str] = []

    for scenario in doc.scenarios:
        resolved = {item.id: item for item in resolved_items(scenario, ctx)}
        for item in scenario.items:
            if item.reported_value_2019 is not None:
                computed = annualized_value(resolved[item.id], ctx.discount)
                reported = item.reported_value_2019
                gap = abs(computed - reported) / abs(reported) if reported else abs(computed)
                within = gap <= DEVIATION_TOLERANCE
                item_checks.append(
                    ItemCheck(scenario.id, item.id, computed, reported, gap, within)
                )
                if not within and (scenario.id, item.id) not in registered:
                    warnings.append(
                        f"{scenario.id}/{item.id}: recomputed per-year value {computed:.2f} differs "
                        f"from transcribed {reported:.2f} beyond tolerance and is not registered"
                    )
            if item.basis is not None:
                if isinstance(item.basis, EmissionBasis):
                    computed = emission_cost(item.basis.excavated_volume_m3, ctx)
                else:
                    computed = effective_amount(
                        CashFlowItem(
                            id=item.id,
                            kind=item.kind,
                            category=item.category,
                            raw_amount=item.raw_amount,
                            timing=item.timing,
                            basis=item.basis,
                            basis_mode="authoritative",
                        ),
                        ctx,
                    )
                stored = item.raw_amount
                gap = abs(computed - stored) / abs(stored) if stored else abs(computed)
                entry = registered.get((scenario.id, item.id))
                basis_checks.append(
                    BasisCheck(scenario.id, item.id, stored, computed, gap, entry is not None)
                )
                if gap > DEVIATION_TOLERANCE and entry is None:
                    warnings.append(
                        f"{scenario.id}/{item.id}: stored amount {stored:.2f} differs from its "
                        f"monetization chain ({computed:.2f}) and is not registered"
                    )
                if entry is not None and round(entry.computed, 2) != round(computed, 2):
                    warnings.append(
                        f"{scenario.id}/{item.id}: appendix computed value {entry.computed:.2f} "
                        f"no longer matches recomputation {computed:.2f}"
                    )

    return ValidationReport(
        dataset_id=doc.id,
        item_checks=tuple(item_checks),
        basis_checks=tuple(basis_checks),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------


def _fmt_money(value: Any) -> str:
    return "" if value is None else f"{value:.2f}"


def _fmt_ratio(value: Any) -> str:
    return "" if value is None else f"{value:.6f}"


def _kpi_rows(report: dict, writer: Any, *, recommended: str | None = None) -> None:
    header = [
        "dataset",
        "scenario_id",
        "role",
        "label",
        "pv_costs",
        "pv_benefits",
        "npv",
        "bcr",
        "roi",
        "cost_per_m2",
        "npv_per_m2",
    ]
    if recommended is not None:
        header.append("recommended")
    writer.writerow(header)
    for kpi in report["scenarios"]:
        row = [
            report["dataset"],
            kpi["scenario_id"],
            kpi["role"],
            kpi["label"],
            _fmt_money(kpi["pv_costs"]),
            _fmt_money(kpi["pv_benefits"]),
            _fmt_money(kpi["npv"]),
            _fmt_ratio(kpi["bcr"]),
            _fmt_ratio(kpi["roi"]),
            _fmt_money(kpi["cost_per_m2"]),
            _fmt_money(kpi["npv_per_m2"]),
        ]
        if recommended is not None:
            row.append("yes" if kpi["scenario_id"] == recommended else "no")
        writer.writerow(row)


def _report_to_csv(report: dict) -> str:
    buffer = _stringio.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    kind = report.get("kind")
    if kind == "evaluate":
        _kpi_rows(report, writer)
    elif kind == "compare":
        _kpi_rows(report, writer, recommended=report["recommended"])
    elif kind == "sweep":
        targets = [spec["target"] for spec in report["params"]]
        writer.writerow(["cell", *targets, "scenario_id", "pv_costs", "pv_benefits", "npv", "bcr", "roi"])
        for index, cell in enumerate(report["cells"]):
            for kpi in cell["scenarios"]:
                writer.writerow(
                    [
                        index,
                        *(cell["values"][t] for t in targets),
                        kpi["scenario_id"],
                        _fmt_money(kpi["pv_costs"]),
                        _fmt_money(kpi["pv_benefits"]),
                        _fmt_money(kpi["npv"]),
                        _fmt_ratio(kpi["bcr"]),
                        _fmt_ratio(kpi["roi"]),
                    ]
                )
    elif kind == "forecast":
        writer.writerow(["year", "mean", "lower95", "upper95"])
        for year, mean, lower, upper in zip(
            report["years"], report["mean"], report["lower95"], report["upper95"]
        ):
            writer.writerow([year, _fmt_money(mean), _fmt_money(lower), _fmt_money(upper)])
    elif kind == "validate":
        writer.writerow(["check", "scenario_id", "item_id", "computed", "reference", "relative_gap", "flag"])
        for check in report["item_checks"]:
            writer.writerow(
                [
                    "item",
                    check["scenario_id"],
                    check["item_id"],
                    _fmt_money(check["computed"]),
                    _fmt_money(check["reported"]),
                    _fmt_ratio(check["relative_gap"]),
                    "ok" if check["within_tolerance"] else "deviates",
                ]
            )
        for check in report["basis_checks"]:
            writer.writerow(
                [
                    "basis",
                    check["scenario_id"],
                    check["item_id"],
                    _fmt_money(check["computed"]),
                    _fmt_money(check["stored"]),
                    _fmt_ratio(check["relative_gap"]),
                    "registered" if check["registered"] else "ok",
                ]
            )
    else:
        raise DomainError(f"cannot render CSV for report kind {kind!r}")
    return buffer.getvalue()


def emit_report(report: dict, format: str = "json") -> bytes:
    """Serialize a report document.

    JSON emission is canonical (sorted keys, fixed indent), so
    emit -> parse -> emit is byte-identical. CSV uses '.' decimals,
    two-decimal money and UTF-8.
    """
    if format == "json":
        return canonical_json_bytes(report)
    if format == "csv":
        return _report_to_csv(report).encode("utf-8")
    raise DomainError(f"unknown report format: {format!r}")
