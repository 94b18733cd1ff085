"""Matplotlib figure rendering for report documents.

When the CLI writes a report to a file, the matching figure is rendered
next to it: a banded trajectory for forecasts, KPI-vs-parameter curves
for sweeps, and grouped KPI bars for evaluations and comparisons.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _kpi_bars(report: dict, ax) -> None:
    scenarios = report["scenarios"]
    labels = [k["scenario_id"] for k in scenarios]
    metrics = ["pv_costs", "pv_benefits", "npv"]
    x = np.arange(len(labels))
    width = 0.25
    for offset, metric in enumerate(metrics):
        values = [k[metric] for k in scenarios]
        ax.bar(x + (offset - 1) * width, values, width, label=metric.replace("_", " "))
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylabel("EUR / year")
    ax.legend()
    title = f"{report['dataset']}: scenario KPIs"
    if report.get("recommended"):
        title += f" (recommended: {report['recommended']})"
    ax.set_title(title)


def _forecast_band(report: dict, ax) -> None:
    years = report["years"]
    ax.fill_between(years, report["lower95"], report["upper95"], alpha=0.25, label="95% band")
    ax.plot(years, report["mean"], label="mean")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("year")
    ax.set_ylabel("cumulative NPV (EUR)")
    ax.set_title(f"{report['dataset']} / {report['scenario_id']}: NPV forecast ({report['mode']})")
    ax.legend()


def _sweep_curves(report: dict, ax) -> None:
    targets = [spec["target"] for spec in report["params"]]
    cells = report["cells"]
    scenario_ids = [k["scenario_id"] for k in cells[0]["scenarios"]]
    if len(targets) == 1:
        x = [cell["values"][targets[0]] for cell in cells]
        ax.set_xlabel(targets[0])
    else:
        x = list(range(len(cells)))
        ax.set_xlabel("grid cell")
    for idx, scenario_id in enumerate(scenario_ids):
        y = [cell["scenarios"][idx]["npv"] for cell in cells]
        ax.plot(x, y, marker="o", label=scenario_id)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_ylabel("NPV (EUR / year)")
    ax.set_title(f"{report['dataset']}: NPV sensitivity")
    ax.legend()


def render_report_figure(report: dict, path: str | Path) -> Path | None:
    """Render the figure matching a report document, if it has one.

    Returns the written path, or None for report kinds without a figure
    (validation reports).
    """
    kind = report.get("kind")
    if kind not in ("evaluate", "compare", "sweep", "forecast"):
        return None
    fig, ax = plt.subplots(figsize=(8, 5))
    try:
        if kind in ("evaluate", "compare"):
            _kpi_bars(report, ax)
        elif kind == "sweep":
            _sweep_curves(report, ax)
        else:
            _forecast_band(report, ax)
        fig.tight_layout()
        path = Path(path)
        fig.savefig(path, dpi=150)
        return path
    finally:
        plt.close(fig)
