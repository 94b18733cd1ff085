"""Tests for the time-value arithmetic: discount factors, present value,
annualization conventions and aggregation."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greenval.errors import DomainError, DuplicateItemIdError
from greenval.ledger import (
    CashFlowItem,
    DiscountModel,
    TimingProfile,
    aggregate,
    annualized_value,
    discount_factor,
    present_value,
)

FIVE_PCT = DiscountModel(rate=0.05, base_year=2019)


def make_item(item_id="x", kind="cost", raw=100.0, timing=None, **kw):
    return CashFlowItem(
        id=item_id,
        kind=kind,
        category="operational",
        raw_amount=raw,
        timing=timing or TimingProfile.recurring(),
        **kw,
    )


class TestDiscountFactor:
    def test_one_year_at_five_percent(self):
        assert round(discount_factor(FIVE_PCT, 1), 6) == 0.952381

    def test_year_zero_is_identity(self):
        for rate in (-0.5, 0.0, 0.05, 0.25):
            assert discount_factor(DiscountModel(rate=rate), 0) == 1.0

    def test_thirty_years(self):
        # direct power computation: 1.05 ** -30
        assert round(discount_factor(FIVE_PCT, 30), 6) == 0.231377

    def test_negative_t_rejected(self):
        with pytest.raises(DomainError):
            discount_factor(FIVE_PCT, -1)

    def test_zero_rate_flat(self):
        model = DiscountModel(rate=0.0)
        assert all(discount_factor(model, t) == 1.0 for t in (0, 1, 7, 30))

    @given(st.floats(min_value=-0.99, max_value=1.0), st.floats(min_value=0, max_value=100))
    def test_strictly_positive(self, rate, t):
        assert discount_factor(DiscountModel(rate=rate), t) > 0

    @given(st.floats(min_value=0.001, max_value=0.5), st.integers(min_value=0, max_value=98))
    def test_strictly_decreasing_for_positive_rates(self, rate, t):
        model = DiscountModel(rate=rate)
        assert discount_factor(model, t + 1) < discount_factor(model, t)


class TestDiscountModelInvariants:
    def test_rate_must_exceed_minus_one(self):
        with pytest.raises(DomainError):
            DiscountModel(rate=-1.0)
        DiscountModel(rate=-0.999)  # allowed

    def test_base_year_bounds(self):
        with pytest.raises(DomainError):
            DiscountModel(base_year=1899)
        with pytest.raises(DomainError):
            DiscountModel(base_year=2201)


class TestPresentValue:
    def test_mowing_item(self):
        assert round(present_value(1000.0, FIVE_PCT, 1), 2) == 952.38

    def test_zero_amount(self):
        assert present_value(0.0, FIVE_PCT, 17) == 0.0

    def test_thirty_year_amount(self):
        # 5000 x 1.05 ** -30
        assert round(present_value(5000.0, FIVE_PCT, 30), 2) == 1156.89

    @given(
        st.floats(min_value=0, max_value=1e9),
        st.floats(min_value=0.1, max_value=10),
        st.integers(min_value=0, max_value=50),
    )
    def test_homogeneous_in_amount(self, amount, scale, t):
        lhs = present_value(scale * amount, FIVE_PCT, t)
        rhs = scale * present_value(amount, FIVE_PCT, t)
        assert math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-9)


class TestTimingProfile:
    def test_unknown_variant(self):
        with pytest.raises(DomainError):
            TimingProfile("monthly")

    def test_year_parameter_required(self):
        with pytest.raises(DomainError):
            TimingProfile("one_off_annualized")
        with pytest.raises(DomainError):
            TimingProfile("periodic_averaged", 0)

    def test_recurring_takes_no_years(self):
        with pytest.raises(DomainError):
            TimingProfile("recurring_immediate", 3)


class TestAnnualizedValue:
    """Golden per-item values transcribed from the case-study tables."""

    @pytest.mark.parametrize(
        "raw,timing,expected",
        [
            (5000.0, TimingProfile.one_off(30), 166.67),
            (90500.0, TimingProfile.one_off(30), 3016.67),
            (12500.0, TimingProfile.one_off(30), 416.67),
            (3708.0, TimingProfile.one_off(30), 123.60),
            (1000.0, TimingProfile.deferred(1), 952.38),
            (1720.0, TimingProfile.periodic(5), 344.00),
            (940.80, TimingProfile.recurring(), 940.80),
            (10800.0, TimingProfile.deferred(1), 10285.71),
        ],
    )
    def test_golden_values(self, raw, timing, expected):
        item = make_item(raw=raw, timing=timing)
        assert round(annualized_value(item, FIVE_PCT), 2) == expected

    @given(st.floats(min_value=0, max_value=1e9), st.integers(min_value=1, max_value=100))
    def test_one_off_split_has_no_discounting(self, raw, lifespan):
        item = make_item(raw=raw, timing=TimingProfile.one_off(lifespan))
        assert math.isclose(
            lifespan * annualized_value(item, FIVE_PCT), raw, rel_tol=1e-12, abs_tol=1e-9
        )

    def test_deferred_value_decreases_with_rate(self):
        item = make_item(raw=1000.0, timing=TimingProfile.deferred(1))
        values = [annualized_value(item, DiscountModel(rate=r)) for r in (0.025, 0.05, 0.075)]
        assert values[0] > values[1] > values[2]

    def test_non_deferred_values_rate_invariant(self):
        for timing in (TimingProfile.one_off(30), TimingProfile.recurring(), TimingProfile.periodic(5)):
            item = make_item(raw=777.0, timing=timing)
            values = {annualized_value(item, DiscountModel(rate=r)) for r in (0.025, 0.05, 0.075)}
            assert len(values) == 1


class TestAggregate:
    def test_empty(self):
        totals = aggregate([], FIVE_PCT)
        assert totals.pv_costs == 0.0
        assert totals.pv_benefits == 0.0

    def test_kind_separation(self):
        items = [
            make_item("c1", "cost", 100.0),
            make_item("c2", "cost", 50.0, TimingProfile.periodic(5)),
            make_item("b1", "benefit", 300.0),
        ]
        totals = aggregate(items, FIVE_PCT)
        assert totals.pv_costs == 110.0
        assert totals.pv_benefits == 300.0

    def test_duplicate_ids_rejected(self):
        items = [make_item("dup"), make_item("dup")]
        with pytest.raises(DuplicateItemIdError):
            aggregate(items, FIVE_PCT)

    def test_permutation_invariant_bit_exact(self):
        rng = random.Random(1234)
        items = [
            make_item(f"i{n}", "cost" if n % 2 else "benefit", rng.uniform(0, 1e6))
            for n in range(25)
        ]
        reference = aggregate(items, FIVE_PCT)
        for _ in range(5):
            rng.shuffle(items)
            shuffled = aggregate(items, FIVE_PCT)
            assert shuffled == reference

    def test_additive_over_disjoint_lists(self):
        a = [make_item(f"a{n}", "cost", 10.0 + n / 7) for n in range(9)]
        b = [make_item(f"b{n}", "cost", 5.0 + n / 3) for n in range(9)]
        combined = aggregate(a + b, FIVE_PCT)
        separate = aggregate(a, FIVE_PCT).pv_costs + aggregate(b, FIVE_PCT).pv_costs
        assert math.isclose(combined.pv_costs, separate, rel_tol=1e-12)


class TestCashFlowItemInvariants:
    def test_negative_amount_rejected(self):
        with pytest.raises(DomainError):
            make_item(raw=-1.0)

    def test_bad_kind_rejected(self):
        with pytest.raises(DomainError):
            make_item(kind="revenue")

    def test_empty_id_rejected(self):
        with pytest.raises(DomainError):
            make_item(item_id="")
