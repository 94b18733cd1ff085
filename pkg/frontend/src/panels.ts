// Pure panel-model builders. Every number these models carry comes
// straight from a service response; deltas are used only to order and
// size tornado bars, never displayed.

import type { CompareResponse, ControlName, ControlSpec, ForecastResponse, KpiReport, SweepResponse } from './types';

export interface ComparisonRow {
  scenarioId: string;
  label: string;
  role: string;
  npv: number;
  bcr: number | null;
  roi: number | null;
  recommended: boolean;
  negative: boolean;
}

export interface ComparisonModel {
  rows: ComparisonRow[];
  notes: string[];
  deviations: { scenarioId: string; metric: string; computed: number | null; reported: number }[];
}

export function buildComparison(response: CompareResponse): ComparisonModel {
  const rows = response.scenarios.map((kpi: KpiReport) => ({
    scenarioId: kpi.scenario_id,
    label: kpi.label,
    role: kpi.role,
    npv: kpi.npv,
    bcr: kpi.bcr,
    roi: kpi.roi,
    recommended: kpi.scenario_id === response.recommended,
    negative: kpi.npv < 0,
  }));
  const deviations = response.scenarios.flatMap((kpi) =>
    kpi.deviations.map((d) => ({
      scenarioId: kpi.scenario_id,
      metric: d.metric,
      computed: d.computed,
      reported: d.reported,
    })),
  );
  return { rows, notes: response.notes, deviations };
}

export interface TornadoEntry {
  control: ControlName;
  label: string;
  lowSetting: number;
  highSetting: number;
  /** NPV of the focus scenario at the control's low and high bound. */
  npvLow: number;
  npvHigh: number;
  /** Sort/size key only (never displayed). */
  delta: number;
}

function focusNpv(cellScenarios: KpiReport[]): number {
  // The alternative scenario is the intervention under study; fall back
  // to the first scenario for synthetic payloads.
  const focus = cellScenarios.find((s) => s.role === 'alternative') ?? cellScenarios[0];
  return focus.npv;
}

export function buildTornado(
  controls: ControlSpec[],
  sweeps: Map<ControlName, SweepResponse>,
): TornadoEntry[] {
  const entries: TornadoEntry[] = [];
  for (const control of controls) {
    const sweep = sweeps.get(control.name);
    if (!sweep || sweep.cells.length < 2) continue;
    const npvLow = focusNpv(sweep.cells[0].scenarios);
    const npvHigh = focusNpv(sweep.cells[sweep.cells.length - 1].scenarios);
    entries.push({
      control: control.name,
      label: control.label,
      lowSetting: control.min,
      highSetting: control.max,
      npvLow,
      npvHigh,
      delta: npvHigh - npvLow,
    });
  }
  entries.sort((a, b) => Math.abs(b.delta) - Math.abs(a.delta));
  return entries;
}

export interface BandSeries {
  years: number[];
  mean: number[];
  lower: number[];
  upper: number[];
  terminalNegative: boolean;
}

export function buildBand(response: ForecastResponse): BandSeries {
  const { years, mean, lower95, upper95 } = response;
  if (mean.length !== years.length || lower95.length !== years.length || upper95.length !== years.length) {
    throw new Error('forecast series lengths differ');
  }
  for (let i = 1; i < years.length; i += 1) {
    if (years[i] <= years[i - 1]) throw new Error('forecast years must be strictly increasing');
  }
  return {
    years,
    mean,
    lower: lower95,
    upper: upper95,
    terminalNegative: mean[mean.length - 1] < 0,
  };
}
