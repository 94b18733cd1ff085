"""Conversion of physical quantities and foreign-currency rates into
base-year euros.

Inflation and FX are collapsed into a single multiplicative rebase factor
per (currency, year) pair. The published case studies never disclose the
underlying indices, so factors are calibrated from paired values in the
source tables and shipped with the dataset; an unknown pair is always an
explicit error, never a silent 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError, MissingRebaseFactorError, UnitMismatchError
from .ledger import DiscountModel

RATE_UNITS = ("per_m3", "per_ha", "per_tonne", "per_kWh", "per_hour")


@dataclass(frozen=True)
class UnitRate:
    """A price per physical unit in a given currency and price year."""

    value: float
    unit: str
    currency: str = "EUR"
    price_year: int = 2019

    def __post_init__(self) -> None:
        if self.value < 0:
            raise DomainError(f"unit rate must be >= 0, got {self.value}")
        if self.unit not in RATE_UNITS:
            raise DomainError(f"unknown rate unit: {self.unit!r}")


@dataclass(frozen=True)
class ConversionContext:
    """Everything needed to express amounts in base-year euros.

    ``rebase_factors`` maps (currency, year) to the multiplier into
    (base_currency, base_year); the identity pair must be present and
    equal to 1. Carbon pricing is a context parameter so sweeps can vary
    it without touching the datasets.
    """

    base_currency: str = "EUR"
    base_year: int = 2019
    rebase_factors: Mapping[tuple[str, int], float] = field(default_factory=dict)
    carbon_price_eur_per_tonne: float = 60.0
    excavation_emission_factor_kg_per_m3: float = 0.48
    discount: DiscountModel = field(default_factory=DiscountModel)
    lifespan_years: int = 30

    def __post_init__(self) -> None:
        identity = self.rebase_factors.get((self.base_currency, self.base_year))
        if identity is None:
            raise DomainError(
                f"rebase factor for the base pair ({self.base_currency}, {self.base_year}) is required"
            )
        if identity != 1.0:
            raise DomainError(f"base pair rebase factor must be 1, got {identity}")
        for (currency, year), factor in self.rebase_factors.items():
            if factor <= 0:
                raise DomainError(f"rebase factor for ({currency}, {year}) must be > 0")
        if self.carbon_price_eur_per_tonne < 0:
            raise DomainError("carbon price must be >= 0")
        if self.excavation_emission_factor_kg_per_m3 < 0:
            raise DomainError("emission factor must be >= 0")
        if self.lifespan_years < 1:
            raise DomainError("lifespan must be >= 1 year")


def rebase(amount: float, currency: str, year: int, ctx: ConversionContext) -> float:
    """Convert an amount quoted in (currency, year) into base-year euros.

    Raises
    ------
    MissingRebaseFactorError
        If the (currency, year) pair has no calibrated factor.
    """
    factor = ctx.rebase_factors.get((currency, year))
    if factor is None:
        raise MissingRebaseFactorError(currency, year)
    return amount * factor


def rebase_rate(rate: UnitRate, ctx: ConversionContext) -> float:
    """Rebase a unit rate's value; the physical unit is unchanged."""
    return rebase(rate.value, rate.currency, rate.price_year, ctx)


def unit_rate_value(
    rate: UnitRate,
    quantity: float,
    ctx: ConversionContext,
    quantity_unit: str | None = None,
) -> float:
    """Value a physical quantity at a unit rate, in base-year euros.

    ``quantity_unit``, when given, must match the rate's unit; this guards
    against e.g. valuing hectares at a per-m3 price.
    """
    if quantity < 0:
        raise DomainError(f"quantity must be >= 0, got {quantity}")
    if quantity_unit is not None and quantity_unit != rate.unit:
        raise UnitMismatchError(f"quantity in {quantity_unit!r} valued at a {rate.unit!r} rate")
    return rebase_rate(rate, ctx) * quantity


def emission_cost(excavated_volume_m3: float, ctx: ConversionContext) -> float:
    """One-off carbon cost of excavating a soil volume.

    volume [m3] x emission factor [kg CO2e/m3] / 1000 x carbon price [EUR/t].
    """
    if excavated_volume_m3 < 0:
        raise DomainError("excavated volume must be >= 0")
    tonnes = excavated_volume_m3 * ctx.excavation_emission_factor_kg_per_m3 / 1000.0
    return tonnes * ctx.carbon_price_eur_per_tonne


def pollutant_removal_value(mass_kg_per_year: float, price: UnitRate, ctx: ConversionContext) -> float:
    """Annual value of removing a pollutant mass at a per-tonne price."""
    if mass_kg_per_year < 0:
        raise DomainError("removal mass must be >= 0")
    if price.unit != "per_tonne":
        raise UnitMismatchError(f"pollutant prices must be per_tonne, got {price.unit!r}")
    return mass_kg_per_year / 1000.0 * rebase_rate(price, ctx)
