// Thin typed client over the service's JSON API. The fetch function is
// injectable so tests can intercept every request and assert on payloads.

import type {
  CompareResponse,
  DatasetDocument,
  ForecastResponse,
  OverridePayload,
  SweepResponse,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw new Error(`GET ${path} failed: ${response.status}`);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw new Error(`POST ${path} failed: ${response.status}`);
    return (await response.json()) as T;
  }

  listCaseStudies(): Promise<string[]> {
    return this.get<string[]>('/api/case-studies');
  }

  getCaseStudy(id: string): Promise<DatasetDocument> {
    return this.get<DatasetDocument>(`/api/case-studies/${id}`);
  }

  compare(payload: OverridePayload): Promise<CompareResponse> {
    return this.post<CompareResponse>('/api/compare', payload);
  }

  sweep(payload: OverridePayload & { params: { target: string; values: number[] }[] }): Promise<SweepResponse> {
    return this.post<SweepResponse>('/api/sweep', payload);
  }

  forecast(payload: OverridePayload & { samples?: number; seed?: number }): Promise<ForecastResponse> {
    return this.post<ForecastResponse>('/api/forecast', payload);
  }
}
