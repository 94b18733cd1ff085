"""Scenario assembly, KPI evaluation and baseline-vs-alternative comparison.

KPIs follow the standard present-value identities: NPV = B - C,
BCR = B / C, and ROI = (B - I) / I with the investment base I defaulting
to total PV costs (the published KPI tables are only consistent with that
base; a "capex" mode restricts I to capital items for the stricter
reading).

Published aggregates are never inputs to the computation. They ride along
as assertions, and every reported figure produces exactly one deviation
entry comparing it against the recomputed value.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, Sequence

from .errors import DomainError
from .ledger import (
    CashFlowItem,
    DiscountModel,
    EmissionBasis,
    Totals,
    UnitRateBasis,
    aggregate,
    annualized_value,
)
from .monetize import ConversionContext, UnitRate, emission_cost, unit_rate_value

# Reported aggregates differing from recomputation by more than this
# relative gap are flagged as out of tolerance.
DEVIATION_TOLERANCE = 0.005

AGGREGATE_METRICS = ("total_costs", "total_benefits", "npv", "bcr", "roi")


@dataclass(frozen=True)
class WaterBounds:
    """Annual water volume range of a scenario, in m3/year."""

    min: float
    nominal: float
    max: float

    def __post_init__(self) -> None:
        if not (0 <= self.min <= self.nominal <= self.max):
            raise DomainError(
                f"water bounds must satisfy 0 <= min <= nominal <= max, got "
                f"({self.min}, {self.nominal}, {self.max})"
            )


@dataclass(frozen=True)
class Scenario:
    """A named bundle of cash-flow items plus physical metadata."""

    id: str
    label: str
    role: Literal["baseline", "alternative"]
    items: tuple[CashFlowItem, ...]
    area_m2: float
    lifespan_years: int = 30
    annual_water_m3: WaterBounds | None = None
    reported_aggregates: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.role not in ("baseline", "alternative"):
            raise DomainError(f"scenario role must be baseline|alternative, got {self.role!r}")
        if self.area_m2 <= 0:
            raise DomainError(f"scenario {self.id}: area must be > 0")
        if self.lifespan_years < 1:
            raise DomainError(f"scenario {self.id}: lifespan must be >= 1")
        for metric in self.reported_aggregates:
            if metric not in AGGREGATE_METRICS:
                raise DomainError(f"scenario {self.id}: unknown reported aggregate {metric!r}")


@dataclass(frozen=True)
class Deviation:
    """Gap between one recomputed aggregate and its published value."""

    metric: str
    computed: float | None
    reported: float
    relative_gap: float | None
    within_tolerance: bool


@dataclass(frozen=True)
class KpiReport:
    scenario_id: str
    label: str
    role: str
    area_m2: float
    pv_costs: float
    pv_benefits: float
    npv: float
    bcr: float | None
    roi: float | None
    cost_per_m2: float
    npv_per_m2: float
    deviations: tuple[Deviation, ...]


@dataclass(frozen=True)
class ComparisonReport:
    reports: tuple[KpiReport, KpiReport]   # baseline first
    recommended: str
    notes: tuple[str, ...]


@dataclass(frozen=True)
class Overrides:
    """What-if knobs applied on top of a loaded case study.

    ``water_price`` retargets per-m3 authoritative rates on water-linked
    items; ``carbon_price`` rescales emission-derived amounts via their
    price anchor; ``item_amounts`` pins individual raw amounts (winning
    over any basis recomputation); ``water_volume`` rescales water-linked
    items relative to the scenario's nominal volume.
    """

    discount_rate: float | None = None
    water_volume: float | None = None
    carbon_price: float | None = None
    water_price: float | None = None
    item_amounts: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.water_volume is not None and self.water_volume < 0:
            raise DomainError("water volume must be >= 0")
        if self.carbon_price is not None and self.carbon_price < 0:
            raise DomainError("carbon price must be >= 0")
        if self.water_price is not None and self.water_price < 0:
            raise DomainError("water price must be >= 0")
        for item_id, amount in self.item_amounts.items():
            if amount < 0:
                raise DomainError(f"override amount for {item_id!r} must be >= 0")


def kpis(pv_benefits: float, pv_costs: float) -> tuple[float, float | None, float | None]:
    """Return (npv, bcr, roi) for aggregated totals.

    BCR and ROI are undefined (None), not infinite, when costs are zero.
    ROI here uses total PV costs as the investment base, which makes
    roi == bcr - 1 an exact identity.
    """
    if pv_costs < 0 or pv_benefits < 0:
        raise DomainError("totals must be >= 0")
    npv = pv_benefits - pv_costs
    if pv_costs == 0:
        return npv, None, None
    bcr = pv_benefits / pv_costs
    return npv, bcr, bcr - 1.0


def effective_amount(item: CashFlowItem, ctx: ConversionContext) -> float:
    """Resolve an item's amount under a conversion context.

    Authoritative bases are recomputed from their monetization chain;
    reference emission bases keep the stored amount but rescale it when
    the context's carbon price moves off the anchor the amount was priced
    at. Items without a basis pass through unchanged.
    """
    basis = item.basis
    if basis is None:
        return item.raw_amount
    if isinstance(basis, UnitRateBasis):
        if item.basis_mode == "authoritative":
            rate = UnitRate(basis.value, basis.unit, basis.currency, basis.price_year)
            return unit_rate_value(rate, basis.quantity, ctx)
        return item.raw_amount
    if isinstance(basis, EmissionBasis):
        if item.basis_mode == "authoritative":
            return emission_cost(basis.excavated_volume_m3, ctx)
        return item.raw_amount * (ctx.carbon_price_eur_per_tonne / basis.priced_at_eur_per_tonne)
    raise DomainError(f"item {item.id}: unsupported basis {type(basis).__name__}")


def resolved_items(
    scenario: Scenario,
    ctx: ConversionContext,
    water_volume: float | None = None,
) -> list[CashFlowItem]:
    """Return plain items with basis and water scaling applied.

    ``water_volume`` rescales water-linked items by volume / nominal;
    scenarios without water metadata ignore the override.
    """
    factor = 1.0
    if water_volume is not None and scenario.annual_water_m3 is not None:
        if water_volume < 0:
            raise DomainError("water volume must be >= 0")
        factor = water_volume / scenario.annual_water_m3.nominal
    out: list[CashFlowItem] = []
    for item in scenario.items:
        amount = effective_amount(item, ctx)
        if item.scales_with_water:
            amount = amount * factor
        out.append(replace(item, raw_amount=amount, basis=None, basis_mode="reference"))
    return out


def _relative_gap(computed: float | None, reported: float) -> float | None:
    if computed is None:
        return None
    if reported == 0:
        # No scale to normalize by; fall back to the absolute gap.
        return abs(computed - reported)
    return abs(computed - reported) / abs(reported)


def build_deviations(
    reported: Mapping[str, float],
    computed: Mapping[str, float | None],
) -> tuple[Deviation, ...]:
    """One entry per reported aggregate, in canonical metric order."""
    entries = []
    for metric in AGGREGATE_METRICS:
        if metric not in reported:
            continue
        value = computed.get(metric)
        gap = _relative_gap(value, reported[metric])
        entries.append(
            Deviation(
                metric=metric,
                computed=value,
                reported=reported[metric],
                relative_gap=gap,
                within_tolerance=gap is not None and gap <= DEVIATION_TOLERANCE,
            )
        )
    return tuple(entries)


def evaluate_scenario(
    scenario: Scenario,
    ctx: ConversionContext,
    *,
    water_volume: float | None = None,
    roi_base: Literal["total", "capex"] = "total",
) -> KpiReport:
    """Aggregate a scenario and derive its KPI report.

    ``roi_base="capex"`` computes ROI against capital costs only
    ((B - I) / I with I the capex subtotal) instead of total PV costs.
    """
    items = resolved_items(scenario, ctx, water_volume)
    totals: Totals = aggregate(items, ctx.discount)
    npv, bcr, roi = kpis(totals.pv_benefits, totals.pv_costs)
    if roi_base == "capex":
        investment = sum(
            annualized_value(item, ctx.discount)
            for item in items
            if item.kind == "cost" and item.category == "capex"
        )
        roi = (totals.pv_benefits - investment) / investment if investment > 0 else None
    elif roi_base != "total":
        raise DomainError(f"roi_base must be total|capex, got {roi_base!r}")

    deviations = build_deviations(
        scenario.reported_aggregates,
        {
            "total_costs": totals.pv_costs,
            "total_benefits": totals.pv_benefits,
            "npv": npv,
            "bcr": bcr,
            "roi": roi,
        },
    )
    return KpiReport(
        scenario_id=scenario.id,
        label=scenario.label,
        role=scenario.role,
        area_m2=scenario.area_m2,
        pv_costs=totals.pv_costs,
        pv_benefits=totals.pv_benefits,
        npv=npv,
        bcr=bcr,
        roi=roi,
        cost_per_m2=totals.pv_costs / scenario.area_m2,
        npv_per_m2=npv / scenario.area_m2,
        deviations=deviations,
    )


def compare_case(
    baseline: Scenario,
    alternative: Scenario,
    ctx: ConversionContext,
    *,
    water_volume: float | None = None,
    roi_base: Literal["total", "capex"] = "total",
) -> ComparisonReport:
    """Evaluate both scenarios and recommend the NPV maximizer.

    Ties go to the baseline (keeping the status quo is the conservative
    default); any scenario with negative NPV gets a "not recommended"
    note.
    """
    base_report = evaluate_scenario(baseline, ctx, water_volume=water_volume, roi_base=roi_base)
    alt_report = evaluate_scenario(alternative, ctx, water_volume=water_volume, roi_base=roi_base)
    recommended = alt_report.scenario_id if alt_report.npv > base_report.npv else base_report.scenario_id
    notes = []
    for report in (base_report, alt_report):
        if report.npv < 0:
            notes.append(f"scenario '{report.scenario_id}' has a negative NPV; not recommended")
    if alt_report.npv == base_report.npv:
        notes.append("scenarios tie on NPV; keeping the baseline")
    return ComparisonReport(
        reports=(base_report, alt_report),
        recommended=recommended,
        notes=tuple(notes),
    )


def apply_overrides(
    ctx: ConversionContext,
    scenarios: Sequence[Scenario],
    overrides: Overrides,
) -> tuple[ConversionContext, list[Scenario]]:
    """Produce a new context and scenarios with what-if knobs applied.

    Water-volume scaling is not baked in here; it stays a parameter of
    evaluation so forecasting can vary it per sample without re-applying
    overrides.
    """
    new_ctx = ctx
    if overrides.discount_rate is not None:
        new_ctx = replace(new_ctx, discount=DiscountModel(overrides.discount_rate, ctx.discount.base_year))
    if overrides.carbon_price is not None:
        new_ctx = replace(new_ctx, carbon_price_eur_per_tonne=overrides.carbon_price)

    known_ids = {item.id for s in scenarios for item in s.items}
    for item_id in overrides.item_amounts:
        if item_id not in known_ids:
            raise DomainError(f"override references unknown item id {item_id!r}")

    new_scenarios = []
    for scenario in scenarios:
        items = []
        for item in scenario.items:
            new_item = item
            if (
                overrides.water_price is not None
                and isinstance(item.basis, UnitRateBasis)
                and item.basis_mode == "authoritative"
                and item.basis.unit == "per_m3"
                and item.scales_with_water
            ):
                new_item = replace(
                    new_item,
                    basis=replace(
                        item.basis,
                        value=overrides.water_price,
                        currency=ctx.base_currency,
                        price_year=ctx.base_year,
                    ),
                )
            if item.id in overrides.item_amounts:
                # A pinned amount wins over any basis recomputation.
                new_item = replace(
                    new_item,
                    raw_amount=overrides.item_amounts[item.id],
                    basis=None,
                    basis_mode="reference",
                )
            items.append(new_item)
        new_scenarios.append(replace(scenario, items=tuple(items)))
    return new_ctx, new_scenarios
