"""Time-value arithmetic: discount factors, present values and the
per-item annualization conventions used by the case-study tables.

All amounts are IEEE-754 doubles in base-year euros. Rounding to cents is a
presentation concern and happens only when reports are emitted.

The tables mix three conventions for turning an itemized amount into a
"value per year at the base year":

* one-off amounts (capital works) are spread uniformly over the asset
  lifespan (``raw / lifespan``), with no discounting inside the split;
* recurring amounts either count at face value or, when the expense only
  starts after one or more years, are discounted by that offset;
* amounts incurred every *p* years are averaged (``raw / p``).

No single formula reproduces every published per-year column, so the
convention is an explicit :class:`TimingProfile` chosen per item.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .errors import DomainError, DuplicateItemIdError

ONE_OFF_ANNUALIZED = "one_off_annualized"
RECURRING_IMMEDIATE = "recurring_immediate"
RECURRING_DEFERRED = "recurring_deferred"
PERIODIC_AVERAGED = "periodic_averaged"

TIMING_VARIANTS = (
    ONE_OFF_ANNUALIZED,
    RECURRING_IMMEDIATE,
    RECURRING_DEFERRED,
    PERIODIC_AVERAGED,
)


@dataclass(frozen=True)
class DiscountModel:
    """Constant-rate discounting anchored at a base calendar year.

    Parameters
    ----------
    rate:
        Annual discount rate as a fraction (0.05 for 5%). Rates down to,
        but excluding, -100% are accepted for sensitivity exploration.
    base_year:
        Calendar year all present values refer to.
    """

    rate: float = 0.05
    base_year: int = 2019

    def __post_init__(self) -> None:
        if not self.rate > -1.0:
            raise DomainError(f"discount rate must be > -1, got {self.rate}")
        if not 1900 <= self.base_year <= 2200:
            raise DomainError(f"base_year out of range [1900, 2200]: {self.base_year}")


@dataclass(frozen=True)
class TimingProfile:
    """How a raw item amount maps onto a per-year value.

    ``years`` is the variant's single integer parameter: the lifespan for
    one-off amounts, the start offset for deferred recurrings, the period
    for averaged periodics. It is ignored (and must be None) for
    immediate recurrings.
    """

    variant: str
    years: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in TIMING_VARIANTS:
            raise DomainError(f"unknown timing variant: {self.variant!r}")
        if self.variant == RECURRING_IMMEDIATE:
            if self.years is not None:
                raise DomainError("recurring_immediate takes no year parameter")
        else:
            if self.years is None or self.years < 1:
                raise DomainError(f"{self.variant} requires years >= 1, got {self.years}")

    @classmethod
    def one_off(cls, lifespan_years: int) -> "TimingProfile":
        return cls(ONE_OFF_ANNUALIZED, lifespan_years)

    @classmethod
    def recurring(cls) -> "TimingProfile":
        return cls(RECURRING_IMMEDIATE)

    @classmethod
    def deferred(cls, offset_years: int) -> "TimingProfile":
        return cls(RECURRING_DEFERRED, offset_years)

    @classmethod
    def periodic(cls, period_years: int) -> "TimingProfile":
        return cls(PERIODIC_AVERAGED, period_years)


@dataclass(frozen=True)
class UnitRateBasis:
    """An item derived from a physical unit rate times a quantity."""

    value: float            # price per unit in (currency, price_year)
    unit: str               # per_m3 | per_ha | per_tonne | per_kWh | per_hour
    currency: str
    price_year: int
    quantity: float

    def __post_init__(self) -> None:
        if self.value < 0:
            raise DomainError(f"unit rate must be >= 0, got {self.value}")
        if self.quantity < 0:
            raise DomainError(f"quantity must be >= 0, got {self.quantity}")


@dataclass(frozen=True)
class EmissionBasis:
    """An item derived from excavation CO2: volume x factor x carbon price.

    ``priced_at_eur_per_tonne`` anchors the stored amount to the carbon
    price it was computed with, so price overrides can rescale it.
    """

    excavated_volume_m3: float
    priced_at_eur_per_tonne: float = 60.0

    def __post_init__(self) -> None:
        if self.excavated_volume_m3 < 0:
            raise DomainError("excavated volume must be >= 0")
        if self.priced_at_eur_per_tonne <= 0:
            raise DomainError("anchor carbon price must be > 0")


@dataclass(frozen=True)
class CashFlowItem:
    """One itemized cost or benefit of a scenario.

    ``raw_amount`` is already in base currency and base year. When
    ``basis`` is present with ``basis_mode="authoritative"`` the effective
    amount is recomputed from the basis under the active conversion
    context; with ``basis_mode="reference"`` the stored amount is used and
    the basis only documents (and validates) the monetization chain.
    """

    id: str
    kind: Literal["cost", "benefit"]
    category: str
    raw_amount: float
    timing: TimingProfile
    provenance: str = ""
    reported_value_2019: float | None = None
    scales_with_water: bool = False
    basis: UnitRateBasis | EmissionBasis | None = None
    basis_mode: Literal["authoritative", "reference"] = "reference"

    def __post_init__(self) -> None:
        if not self.id:
            raise DomainError("item id must be non-empty")
        if self.kind not in ("cost", "benefit"):
            raise DomainError(f"item kind must be cost|benefit, got {self.kind!r}")
        if self.raw_amount < 0:
            raise DomainError(f"item {self.id}: raw_amount must be >= 0")
        if self.basis_mode not in ("authoritative", "reference"):
            raise DomainError(f"item {self.id}: bad basis_mode {self.basis_mode!r}")


@dataclass(frozen=True)
class Totals:
    """Aggregated per-year present values for one scenario."""

    pv_costs: float = 0.0
    pv_benefits: float = 0.0


def discount_factor(model: DiscountModel, t: float) -> float:
    """Return ``(1 + rate) ** -t``, the value today of one unit in year t.

    Parameters
    ----------
    model:
        Discount model supplying the rate.
    t:
        Years after the base year; must be >= 0.
    """
    if t < 0:
        raise DomainError(f"discounting requires t >= 0, got {t}")
    return (1.0 + model.rate) ** (-t)


def present_value(amount: float, model: DiscountModel, t: float) -> float:
    """Discount ``amount`` from year ``t`` back to the base year."""
    return amount * discount_factor(model, t)


def annualized_value(item: CashFlowItem, model: DiscountModel) -> float:
    """Per-year base-year value of one item under its timing convention.

    One-off amounts are split uniformly over the lifespan (no discounting
    inside the split); deferred recurrings are discounted by their start
    offset; periodic amounts are averaged over their period.
    """
    timing = item.timing
    if timing.variant == ONE_OFF_ANNUALIZED:
        return item.raw_amount / timing.years
    if timing.variant == RECURRING_IMMEDIATE:
        return item.raw_amount
    if timing.variant == RECURRING_DEFERRED:
        return item.raw_amount * discount_factor(model, timing.years)
    # PERIODIC_AVERAGED
    return item.raw_amount / timing.years


def check_unique_ids(items: Iterable[CashFlowItem]) -> None:
    """Raise :class:`DuplicateItemIdError` if two items share an id."""
    seen: set[str] = set()
    for item in items:
        if item.id in seen:
            raise DuplicateItemIdError(f"duplicate item id: {item.id!r}")
        seen.add(item.id)


def aggregate(items: Iterable[CashFlowItem], model: DiscountModel) -> Totals:
    """Sum annualized values into per-year cost and benefit totals.

    Summation runs over items sorted by id with exact accumulation
    (``math.fsum``), so the result is independent of input order.
    """
    items = list(items)
    check_unique_ids(items)
    ordered = sorted(items, key=lambda it: it.id)
    costs = math.fsum(annualized_value(it, model) for it in ordered if it.kind == "cost")
    benefits = math.fsum(annualized_value(it, model) for it in ordered if it.kind == "benefit")
    return Totals(pv_costs=costs, pv_benefits=benefits)
