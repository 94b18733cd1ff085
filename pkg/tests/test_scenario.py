"""Tests for KPI evaluation, deviation ledger and scenario comparison."""

from __future__ import annotations

import math
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greenval.errors import DomainError
from greenval.ledger import CashFlowItem, DiscountModel, EmissionBasis, TimingProfile, UnitRateBasis
from greenval.monetize import ConversionContext
from greenval.scenario import (
    Overrides,
    Scenario,
    WaterBounds,
    apply_overrides,
    compare_case,
    effective_amount,
    evaluate_scenario,
    kpis,
    resolved_items,
)

CTX = ConversionContext(
    rebase_factors={("EUR", 2019): 1.0, ("USD", 2018): 2369 / 2700},
    discount=DiscountModel(0.05, 2019),
)

positive = st.floats(min_value=1e-3, max_value=1e12)


def make_item(item_id, kind, raw, timing=None, **kw):
    return CashFlowItem(
        id=item_id,
        kind=kind,
        category=kw.pop("category", "operational"),
        raw_amount=raw,
        timing=timing or TimingProfile.recurring(),
        **kw,
    )


def make_scenario(items, scenario_id="s", role="baseline", area=1000.0, **kw):
    return Scenario(
        id=scenario_id,
        label=scenario_id,
        role=role,
        items=tuple(items),
        area_m2=area,
        **kw,
    )


class TestKpis:
    def test_simple_case(self):
        npv, bcr, roi = kpis(10.0, 4.0)
        assert (npv, bcr, roi) == (6.0, 2.5, 1.5)

    def test_benefits_equal_costs(self):
        npv, bcr, roi = kpis(123.45, 123.45)
        assert npv == 0.0
        assert bcr == 1.0
        assert roi == 0.0

    def test_zero_costs_undefined_ratios(self):
        npv, bcr, roi = kpis(50.0, 0.0)
        assert npv == 50.0
        assert bcr is None
        assert roi is None

    def test_negative_totals_rejected(self):
        with pytest.raises(DomainError):
            kpis(-1.0, 5.0)

    @given(positive, positive)
    def test_roi_is_bcr_minus_one(self, benefits, costs):
        _, bcr, roi = kpis(benefits, costs)
        assert roi == bcr - 1.0

    @given(positive, positive)
    def test_sign_equivalences(self, benefits, costs):
        npv, bcr, roi = kpis(benefits, costs)
        assert (npv > 0) == (bcr > 1) == (roi > 0)
        assert (npv == 0) == (bcr == 1)


class TestEvaluateScenario:
    def test_zero_items(self):
        report = evaluate_scenario(make_scenario([]), CTX)
        assert report.pv_costs == 0.0
        assert report.pv_benefits == 0.0
        assert report.npv == 0.0
        assert report.bcr is None
        assert report.roi is None

    def test_npv_identity_exact(self):
        scenario = make_scenario(
            [make_item("c", "cost", 123.456), make_item("b", "benefit", 333.3)]
        )
        report = evaluate_scenario(scenario, CTX)
        assert report.npv == report.pv_benefits - report.pv_costs

    def test_per_area_kpis(self):
        scenario = make_scenario(
            [make_item("c", "cost", 700.0), make_item("b", "benefit", 1400.0)], area=100.0
        )
        report = evaluate_scenario(scenario, CTX)
        assert report.cost_per_m2 == 7.0
        assert report.npv_per_m2 == 7.0

    def test_deterministic(self):
        scenario = make_scenario(
            [make_item("c", "cost", 1234.5678, TimingProfile.deferred(2)),
             make_item("b", "benefit", 999.99, TimingProfile.one_off(30))]
        )
        assert evaluate_scenario(scenario, CTX) == evaluate_scenario(scenario, CTX)

    def test_roi_capex_base(self):
        scenario = make_scenario(
            [
                make_item("inv", "cost", 3000.0, TimingProfile.one_off(30), category="capex"),
                make_item("op", "cost", 400.0),
                make_item("b", "benefit", 900.0),
            ]
        )
        total = evaluate_scenario(scenario, CTX)
        capex = evaluate_scenario(scenario, CTX, roi_base="capex")
        assert total.roi == total.bcr - 1.0
        investment = 3000.0 / 30
        assert capex.roi == pytest.approx((900.0 - investment) / investment, rel=1e-12)
        # everything else is unchanged
        assert capex.pv_costs == total.pv_costs
        assert capex.bcr == total.bcr

    @given(st.floats(min_value=0.01, max_value=1e3))
    def test_scaling_items_scales_totals_not_ratios(self, scale):
        items = [
            make_item("c1", "cost", 120.0),
            make_item("c2", "cost", 30.0, TimingProfile.one_off(10)),
            make_item("b1", "benefit", 400.0, TimingProfile.deferred(1)),
        ]
        scaled = [replace(it, raw_amount=it.raw_amount * scale) for it in items]
        base = evaluate_scenario(make_scenario(items), CTX)
        scld = evaluate_scenario(make_scenario(scaled), CTX)
        assert math.isclose(scld.pv_costs, scale * base.pv_costs, rel_tol=1e-12)
        assert math.isclose(scld.pv_benefits, scale * base.pv_benefits, rel_tol=1e-12)
        assert math.isclose(scld.npv, scale * base.npv, rel_tol=1e-12, abs_tol=1e-9)
        assert math.isclose(scld.bcr, base.bcr, rel_tol=1e-12)
        assert math.isclose(scld.roi, base.roi, rel_tol=1e-9, abs_tol=1e-12)


class TestDeviationLedger:
    def test_one_entry_per_reported_field(self):
        scenario = make_scenario(
            [make_item("c", "cost", 100.0), make_item("b", "benefit", 150.0)],
            reported_aggregates={"total_costs": 100.0, "total_benefits": 151.0, "npv": 50.0, "bcr": 1.5},
        )
        report = evaluate_scenario(scenario, CTX)
        assert [d.metric for d in report.deviations] == ["total_costs", "total_benefits", "npv", "bcr"]

    def test_gap_math_and_tolerance(self):
        scenario = make_scenario(
            [make_item("c", "cost", 100.0), make_item("b", "benefit", 151.0)],
            reported_aggregates={"total_benefits": 150.0},
        )
        (entry,) = evaluate_scenario(scenario, CTX).deviations
        assert entry.computed == 151.0
        assert entry.reported == 150.0
        assert math.isclose(entry.relative_gap, 1.0 / 150.0)
        assert not entry.within_tolerance

    def test_zero_reported_uses_absolute_gap(self):
        scenario = make_scenario(
            [make_item("c", "cost", 100.0), make_item("b", "benefit", 100.5)],
            reported_aggregates={"npv": 0.0},
        )
        (entry,) = evaluate_scenario(scenario, CTX).deviations
        assert entry.relative_gap == pytest.approx(0.5)
        assert not entry.within_tolerance

    def test_exact_match_within_tolerance(self):
        scenario = make_scenario(
            [make_item("c", "cost", 100.0), make_item("b", "benefit", 250.0)],
            reported_aggregates={"total_costs": 100.0, "bcr": 2.5},
        )
        report = evaluate_scenario(scenario, CTX)
        assert all(d.within_tolerance for d in report.deviations)
        assert all(d.relative_gap == 0.0 for d in report.deviations)

    def test_unknown_metric_rejected(self):
        with pytest.raises(DomainError):
            make_scenario([], reported_aggregates={"irr": 0.1})


class TestCompareCase:
    def test_recommends_argmax_npv(self):
        low = make_scenario([make_item("b", "benefit", 10.0)], "low", "baseline")
        high = make_scenario([make_item("b", "benefit", 20.0)], "high", "alternative")
        comparison = compare_case(low, high, CTX)
        assert comparison.recommended == "high"

    def test_tie_goes_to_baseline(self):
        a = make_scenario([make_item("b", "benefit", 10.0)], "keep", "baseline")
        b = make_scenario([make_item("b", "benefit", 10.0)], "change", "alternative")
        comparison = compare_case(a, b, CTX)
        assert comparison.recommended == "keep"
        assert any("tie" in note for note in comparison.notes)

    def test_negative_npv_note(self):
        good = make_scenario([make_item("b", "benefit", 10.0)], "good", "baseline")
        bad = make_scenario([make_item("c", "cost", 10.0)], "bad", "alternative")
        comparison = compare_case(good, bad, CTX)
        assert comparison.recommended == "good"
        assert any("bad" in note and "not recommended" in note for note in comparison.notes)

    def test_baseline_report_first(self):
        a = make_scenario([], "a", "baseline")
        b = make_scenario([], "b", "alternative")
        comparison = compare_case(a, b, CTX)
        assert [r.role for r in comparison.reports] == ["baseline", "alternative"]


class TestEffectiveAmounts:
    def test_plain_item_passthrough(self):
        item = make_item("x", "cost", 42.0)
        assert effective_amount(item, CTX) == 42.0

    def test_authoritative_unit_rate_recomputed(self):
        item = make_item(
            "water", "benefit", 0.0,
            basis=UnitRateBasis(0.9, "per_m3", "EUR", 2019, 12000),
            basis_mode="authoritative",
        )
        assert effective_amount(item, CTX) == pytest.approx(10800.0)

    def test_reference_unit_rate_keeps_stored(self):
        item = make_item(
            "water", "benefit", 777.0,
            basis=UnitRateBasis(0.9, "per_m3", "EUR", 2019, 12000),
            basis_mode="reference",
        )
        assert effective_amount(item, CTX) == 777.0

    def test_reference_emission_rescales_with_carbon_price(self):
        item = make_item("co2", "cost", 43.42, TimingProfile.one_off(30),
                         basis=EmissionBasis(1500, 60.0))
        assert effective_amount(item, CTX) == 43.42
        half_price = replace(CTX, carbon_price_eur_per_tonne=30.0)
        assert effective_amount(item, half_price) == pytest.approx(21.71)

    def test_authoritative_emission_recomputed(self):
        item = make_item("co2", "cost", 999.0, TimingProfile.one_off(30),
                         basis=EmissionBasis(1500, 60.0), basis_mode="authoritative")
        assert effective_amount(item, CTX) == pytest.approx(43.20)


class TestWaterScaling:
    def make_water_scenario(self):
        return make_scenario(
            [
                make_item("linked", "benefit", 10800.0, TimingProfile.deferred(1), scales_with_water=True),
                make_item("fixed", "benefit", 500.0),
                make_item("c", "cost", 9000.0),
            ],
            annual_water_m3=WaterBounds(6000, 12000, 15000),
        )

    def test_scaling_relative_to_nominal(self):
        scenario = self.make_water_scenario()
        items = {it.id: it for it in resolved_items(scenario, CTX, water_volume=6000)}
        assert items["linked"].raw_amount == pytest.approx(5400.0)
        assert items["fixed"].raw_amount == 500.0

    def test_default_volume_is_nominal(self):
        scenario = self.make_water_scenario()
        default = resolved_items(scenario, CTX)
        nominal = resolved_items(scenario, CTX, water_volume=12000)
        assert [it.raw_amount for it in default] == pytest.approx([it.raw_amount for it in nominal])

    def test_scenario_without_bounds_ignores_override(self):
        scenario = make_scenario([make_item("linked", "benefit", 100.0, scales_with_water=True)])
        items = resolved_items(scenario, CTX, water_volume=999.0)
        assert items[0].raw_amount == 100.0


class TestApplyOverrides:
    def make_pair(self):
        baseline = make_scenario([make_item("keep", "benefit", 10.0)], "base", "baseline")
        alternative = make_scenario(
            [
                make_item(
                    "water", "benefit", 10800.0, TimingProfile.deferred(1),
                    scales_with_water=True,
                    basis=UnitRateBasis(0.9, "per_m3", "EUR", 2019, 12000),
                    basis_mode="authoritative",
                ),
                make_item("maintenance", "cost", 5000.0),
            ],
            "alt",
            "alternative",
            annual_water_m3=WaterBounds(6000, 12000, 15000),
        )
        return baseline, alternative

    def test_discount_and_carbon_override(self):
        baseline, alternative = self.make_pair()
        ctx, _ = apply_overrides(CTX, [baseline, alternative], Overrides(discount_rate=0.075, carbon_price=30.0))
        assert ctx.discount.rate == 0.075
        assert ctx.carbon_price_eur_per_tonne == 30.0

    def test_water_price_override_rewrites_basis(self):
        baseline, alternative = self.make_pair()
        _, (_, alt) = apply_overrides(CTX, [baseline, alternative], Overrides(water_price=1.0))
        water = next(it for it in alt.items if it.id == "water")
        assert effective_amount(water, CTX) == pytest.approx(12000.0)

    def test_item_pin_beats_basis(self):
        baseline, alternative = self.make_pair()
        _, (_, alt) = apply_overrides(
            CTX, [baseline, alternative], Overrides(water_price=1.0, item_amounts={"water": 123.0})
        )
        water = next(it for it in alt.items if it.id == "water")
        assert water.basis is None
        assert effective_amount(water, CTX) == 123.0

    def test_unknown_item_id_rejected(self):
        baseline, alternative = self.make_pair()
        with pytest.raises(DomainError):
            apply_overrides(CTX, [baseline, alternative], Overrides(item_amounts={"nope": 1.0}))

    def test_negative_override_rejected(self):
        with pytest.raises(DomainError):
            Overrides(water_volume=-1.0)


class TestScenarioInvariants:
    def test_area_must_be_positive(self):
        with pytest.raises(DomainError):
            make_scenario([], area=0.0)

    def test_water_bounds_ordering(self):
        with pytest.raises(DomainError):
            WaterBounds(10, 5, 20)

    def test_bad_role(self):
        with pytest.raises(DomainError):
            make_scenario([], role="counterfactual")
