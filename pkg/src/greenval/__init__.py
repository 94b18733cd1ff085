"""Cost-benefit evaluation engine for green-infrastructure scenarios.

Present-value accounting over itemized, provenance-tagged cash flows;
NPV/BCR/ROI scenario comparison with a deviation ledger against published
aggregates; parameter sweeps; and seeded Monte Carlo NPV forecasting with
95% confidence bands. Exposed through a CLI (``greenval``) and an
embedded HTTP service.
"""

__version__ = "0.1.0"

from .ledger import CashFlowItem, DiscountModel, TimingProfile, aggregate, annualized_value, discount_factor, present_value
from .monetize import ConversionContext, UnitRate, emission_cost, pollutant_removal_value, rebase, unit_rate_value
from .scenario import ComparisonReport, KpiReport, Overrides, Scenario, WaterBounds, compare_case, evaluate_scenario, kpis
from .sensitivity import ForecastBand, ParameterSpec, UncertaintySpec, forecast_npv, sweep
from .io import CaseStudyDocument, emit_report, load_bundled, load_case_study, load_registry, validate_document

__all__ = [
    "__version__",
    "CashFlowItem",
    "DiscountModel",
    "TimingProfile",
    "aggregate",
    "annualized_value",
    "discount_factor",
    "present_value",
    "ConversionContext",
    "UnitRate",
    "emission_cost",
    "pollutant_removal_value",
    "rebase",
    "unit_rate_value",
    "ComparisonReport",
    "KpiReport",
    "Overrides",
    "Scenario",
    "WaterBounds",
    "compare_case",
    "evaluate_scenario",
    "kpis",
    "ForecastBand",
    "ParameterSpec",
    "UncertaintySpec",
    "forecast_npv",
    "sweep",
    "CaseStudyDocument",
    "emit_report",
    "load_bundled",
    "load_case_study",
    "load_registry",
    "validate_document",
]
