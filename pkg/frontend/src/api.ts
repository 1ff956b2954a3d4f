/**
 * Typed client for the local simulation service (v1 JSON endpoints).
 *
 * All model math happens server-side; this module only moves payloads.
 */
import type { FieldError, ModelInfo, ParsePhaseResponse, SimulateResponse } from './types.js';

export interface SimulationOptions {
  configural_cues?: boolean;
  num_random_runs?: number;
  seed?: number;
}

export interface SimulationRequest {
  experiment?: string;
  groups?: { name: string; phases: string[] }[];
  model_name?: string;
  parameters?: Record<string, unknown>;
  options?: SimulationOptions;
}

/** A non-2xx service response, carrying the positioned field errors. */
export class ServiceError extends Error {
  readonly errors: FieldError[];

  constructor(errors: FieldError[]) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join('; '));
    this.errors = errors;
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let errors: FieldError[] = [{ field: 'service', message: `HTTP ${response.status}` }];
  try {
    const body = await response.json();
    if (Array.isArray(body.errors)) errors = body.errors;
  } catch {
    // keep the generic error
  }
  throw new ServiceError(errors);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl = 'http://127.0.0.1:8730', fetchFn: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn;
  }

  private async post(path: string, body: unknown, signal?: AbortSignal): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
    await raiseForStatus(response);
    return response;
  }

  async models(): Promise<ModelInfo[]> {
    const response = await this.fetchFn(this.baseUrl + '/v1/models');
    await raiseForStatus(response);
    return response.json();
  }

  async parsePhase(text: string): Promise<ParsePhaseResponse> {
    const response = await this.post('/v1/parse-phase', { text });
    return response.json();
  }

  async simulate(request: SimulationRequest, signal?: AbortSignal): Promise<SimulateResponse> {
    const response = await this.post('/v1/simulate', request, signal);
    return response.json();
  }

  async exportCsv(request: SimulationRequest): Promise<string> {
    const response = await this.post('/v1/export', request);
    return response.text();
  }
}
