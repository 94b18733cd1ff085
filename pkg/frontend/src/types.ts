// Shapes of the service's request and response bodies.

export interface DeviationEntry {
  metric: string;
  computed: number | null;
  reported: number;
  relative_gap: number | null;
  within_tolerance: boolean;
}

export interface KpiReport {
  scenario_id: string;
  label: string;
  role: 'baseline' | 'alternative';
  area_m2: number;
  pv_costs: number;
  pv_benefits: number;
  npv: number;
  bcr: number | null;
  roi: number | null;
  cost_per_m2: number;
  npv_per_m2: number;
  deviations: DeviationEntry[];
}

export interface CompareResponse {
  kind: 'compare';
  dataset: string;
  scenarios: KpiReport[];
  recommended: string;
  notes: string[];
}

export interface SweepCell {
  values: Record<string, number>;
  scenarios: KpiReport[];
}

export interface SweepResponse {
  kind: 'sweep';
  dataset: string;
  params: { target: string; values: number[] }[];
  cells: SweepCell[];
}

export interface ForecastResponse {
  kind: 'forecast';
  dataset: string;
  scenario_id: string;
  mode: string;
  horizon: number;
  years: number[];
  mean: number[];
  lower95: number[];
  upper95: number[];
}

export interface WaterBounds {
  min: number;
  nominal: number;
  max: number;
}

export interface DatasetScenario {
  id: string;
  label: string;
  role: 'baseline' | 'alternative';
  annual_water_m3?: WaterBounds;
  items: { id: string; kind: string; raw_amount: string }[];
}

export interface DatasetDocument {
  id: string;
  metadata: { name?: string };
  scenarios: DatasetScenario[];
}

// What-if controls, mirroring the service's override fields.
export type ControlName =
  | 'discount_rate'
  | 'water_volume'
  | 'maintenance'
  | 'carbon_price'
  | 'water_price';

export interface ControlSpec {
  name: ControlName;
  label: string;
  unit: string;
  min: number;
  max: number;
  step: number;
  value: number;
  /** The dataset-declared default the control starts at. */
  nominal: number;
}

export interface OverridePayload {
  dataset: string;
  discount_rate?: number;
  water_volume?: number;
  carbon_price?: number;
  water_price?: number;
  item_amounts?: Record<string, number>;
}
