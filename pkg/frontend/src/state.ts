// What-if state and request orchestration.
//
// Control changes are debounced (150 ms); each panel carries a monotonic
// request counter so a response is applied only if no newer request has
// been issued for that panel since (last-write-wins). The UI never does
// financial arithmetic: panel data is exactly what the service returned.

import { ApiClient } from './api';
import type {
  CompareResponse,
  ControlName,
  ControlSpec,
  DatasetDocument,
  ForecastResponse,
  OverridePayload,
  SweepResponse,
} from './types';
import { TornadoEntry, buildTornado } from './panels';

export const DEBOUNCE_MS = 150;
export const FORECAST_SAMPLES = 400;
export const FORECAST_SEED = 0;

export type PanelName = 'comparison' | 'tornado' | 'band';
export type PanelStatus = 'idle' | 'loading' | 'ready' | 'error';

export interface PanelState<T> {
  status: PanelStatus;
  data: T | null;
  error: string | null;
  issued: number; // counter of the newest request issued for this panel
  applied: number; // counter of the response currently displayed
}

function freshPanel<T>(): PanelState<T> {
  return { status: 'idle', data: null, error: null, issued: 0, applied: 0 };
}

export interface WhatIfState {
  datasetId: string;
  datasetName: string;
  controls: ControlSpec[];
  maintenanceItemId: string | null;
  waterScenarioId: string | null;
  panels: {
    comparison: PanelState<CompareResponse>;
    tornado: PanelState<TornadoEntry[]>;
    band: PanelState<ForecastResponse>;
  };
}

interface Timers {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const realTimers: Timers = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as number),
};

function controlSpecs(doc: DatasetDocument): {
  controls: ControlSpec[];
  maintenanceItemId: string | null;
  waterScenarioId: string | null;
} {
  const controls: ControlSpec[] = [
    { name: 'discount_rate', label: 'Discount rate', unit: '/yr', min: 0, max: 0.15, step: 0.005, value: 0.05, nominal: 0.05 },
    { name: 'carbon_price', label: 'Carbon price', unit: '€/t', min: 0, max: 200, step: 5, value: 60, nominal: 60 },
    { name: 'water_price', label: 'Water reuse price', unit: '€/m³', min: 0.25, max: 1.5, step: 0.05, value: 0.9, nominal: 0.9 },
  ];

  const waterScenario = doc.scenarios.find((s) => s.annual_water_m3);
  if (waterScenario && waterScenario.annual_water_m3) {
    const bounds = waterScenario.annual_water_m3;
    controls.push({
      name: 'water_volume',
      label: 'Output water',
      unit: 'm³/yr',
      min: bounds.min,
      max: bounds.max,
      step: Math.max(1, Math.round((bounds.max - bounds.min) / 100)),
      value: bounds.nominal,
      nominal: bounds.nominal,
    });
  }

  let maintenanceItemId: string | null = null;
  for (const scenario of doc.scenarios) {
    const item = scenario.items.find((i) => i.id === 'ordinary_maintenance' && i.kind === 'cost');
    if (item) {
      const nominal = Number(item.raw_amount);
      controls.push({
        name: 'maintenance',
        label: 'Ordinary maintenance',
        unit: '€/yr',
        min: 0,
        max: Math.max(2 * nominal, 1000),
        step: 100,
        value: nominal,
        nominal,
      });
      maintenanceItemId = item.id;
      break;
    }
  }

  return { controls, maintenanceItemId, waterScenarioId: waterScenario ? waterScenario.id : null };
}

export class ExplorerController {
  state: WhatIfState;
  onChange: (state: WhatIfState) => void = () => {};

  private debounceHandle: unknown = null;
  private readonly timers: Timers;

  constructor(
    private readonly api: ApiClient,
    doc: DatasetDocument,
    timers: Timers = realTimers,
  ) {
    const derived = controlSpecs(doc);
    this.timers = timers;
    this.state = {
      datasetId: doc.id,
      datasetName: doc.metadata?.name ?? doc.id,
      controls: derived.controls,
      maintenanceItemId: derived.maintenanceItemId,
      waterScenarioId: derived.waterScenarioId,
      panels: {
        comparison: freshPanel<CompareResponse>(),
        tornado: freshPanel<TornadoEntry[]>(),
        band: freshPanel<ForecastResponse>(),
      },
    };
  }

  control(name: ControlName): ControlSpec | undefined {
    return this.state.controls.find((c) => c.name === name);
  }

  /** Apply a control change; a no-op (and no request) when the value is unchanged. */
  setControl(name: ControlName, value: number): void {
    const control = this.control(name);
    if (!control) return;
    const clamped = Math.min(control.max, Math.max(control.min, value));
    if (clamped === control.value) return;
    control.value = clamped;
    this.markStale();
    this.scheduleRefresh();
  }

  /** Immediate refresh of every panel (initial load). */
  refreshNow(): Promise<void> {
    this.cancelPending();
    return this.refresh();
  }

  private markStale(): void {
    for (const panel of Object.values(this.state.panels)) {
      panel.status = 'loading';
    }
    this.onChange(this.state);
  }

  private scheduleRefresh(): void {
    this.cancelPending();
    this.debounceHandle = this.timers.set(() => {
      this.debounceHandle = null;
      void this.refresh();
    }, DEBOUNCE_MS);
  }

  private cancelPending(): void {
    if (this.debounceHandle !== null) {
      this.timers.clear(this.debounceHandle);
      this.debounceHandle = null;
    }
  }

  overrides(): OverridePayload {
    const payload: OverridePayload = { dataset: this.state.datasetId };
    for (const control of this.state.controls) {
      switch (control.name) {
        case 'discount_rate':
          payload.discount_rate = control.value;
          break;
        case 'water_volume':
          payload.water_volume = control.value;
          break;
        case 'carbon_price':
          payload.carbon_price = control.value;
          break;
        case 'water_price':
          payload.water_price = control.value;
          break;
        case 'maintenance':
          if (this.state.maintenanceItemId) {
            payload.item_amounts = { [this.state.maintenanceItemId]: control.value };
          }
          break;
      }
    }
    return payload;
  }

  private async refresh(): Promise<void> {
    await Promise.all([this.refreshComparison(), this.refreshTornado(), this.refreshBand()]);
  }

  private begin(panel: PanelState<unknown>): number {
    panel.issued += 1;
    panel.status = 'loading';
    this.onChange(this.state);
    return panel.issued;
  }

  /** Apply a response only if nothing newer was issued for the panel. */
  private settle<T>(panel: PanelState<T>, ticket: number, data: T | null, error: string | null): void {
    if (ticket < panel.issued) return; // stale response: discard
    panel.applied = ticket;
    if (error !== null) {
      panel.status = 'error';
      panel.error = error;
    } else {
      panel.status = 'ready';
      panel.data = data;
      panel.error = null;
    }
    this.onChange(this.state);
  }

  private async refreshComparison(): Promise<void> {
    const panel = this.state.panels.comparison;
    const ticket = this.begin(panel);
    try {
      const data = await this.api.compare(this.overrides());
      this.settle(panel, ticket, data, null);
    } catch (err) {
      this.settle(panel, ticket, null, String(err));
    }
  }

  private async refreshTornado(): Promise<void> {
    const panel = this.state.panels.tornado;
    const ticket = this.begin(panel);
    const base = this.overrides();
    try {
      const sweeps = new Map<ControlName, SweepResponse>();
      await Promise.all(
        this.state.controls.map(async (control) => {
          const target =
            control.name === 'maintenance'
              ? `item:${this.state.maintenanceItemId}`
              : control.name;
          if (control.name === 'maintenance' && !this.state.maintenanceItemId) return;
          const response = await this.api.sweep({
            ...base,
            params: [{ target, values: [control.min, control.max] }],
          });
          sweeps.set(control.name, response);
        }),
      );
      this.settle(panel, ticket, buildTornado(this.state.controls, sweeps), null);
    } catch (err) {
      this.settle(panel, ticket, null, String(err));
    }
  }

  private async refreshBand(): Promise<void> {
    const panel = this.state.panels.band;
    const ticket = this.begin(panel);
    try {
      // At the nominal volume the band spans the dataset's full water
      // range; a moved slider collapses it onto that volume.
      const payload = { ...this.overrides(), samples: FORECAST_SAMPLES, seed: FORECAST_SEED };
      const water = this.control('water_volume');
      if (water && water.value === water.nominal) delete payload.water_volume;
      const data = await this.api.forecast(payload);
      this.settle(panel, ticket, data, null);
    } catch (err) {
      this.settle(panel, ticket, null, String(err));
    }
  }
}
