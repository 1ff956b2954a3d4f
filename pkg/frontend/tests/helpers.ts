/** Shared fixtures and a controllable fake service client for tests. */
import { ServiceError } from '../src/api.js';
import type { SimulationRequest } from '../src/api.js';
import type { SimApi } from '../src/controller.js';
import type {
  ParsePhaseResponse,
  ParsedTrial,
  SeriesEntry,
  SimulateResponse,
} from '../src/types.js';

export const LISTING = `@model=Le Pelley's Hybrid
@lambda=0.7;beta=0.6;betan=0.5;gamma=0.30;thetaE=0.4;thetaI=0.2
@alpha_D=0.1;alpha_mack_D=0.3;alpha_hall_D=0.7
Novel|5B+/5C-/5D-||rand/beta=4/5A+/5C-/5D-
NegTransfer|5A+/5C-/5D-||rand/beta=4/5A+/5C-/5D-
Change|5A+/5C-/5D-|rand/2A-/2C-/2D-|rand/beta=4/5A+/5C-/5D-
`;

/** What the service serializer produces for LISTING: parameter lines merge. */
export const LISTING_CANONICAL = `@model=Le Pelley's Hybrid
@lambda=0.7;beta=0.6;betan=0.5;gamma=0.30;thetaE=0.4;thetaI=0.2;alpha_D=0.1;alpha_mack_D=0.3;alpha_hall_D=0.7
Novel|5B+/5C-/5D-||rand/beta=4/5A+/5C-/5D-
NegTransfer|5A+/5C-/5D-||rand/beta=4/5A+/5C-/5D-
Change|5A+/5C-/5D-|rand/2A-/2C-/2D-|rand/beta=4/5A+/5C-/5D-
`;

export function series(name: string, values: number[], kind: SeriesEntry['kind'] = 'cs'): SeriesEntry {
  return { name, kind, v: values };
}

export function response(groups: { name: string; phases: SeriesEntry[][] }[]): SimulateResponse {
  return {
    model_name: 'Rescorla Wagner',
    seed: 0,
    groups: groups.map((g) => ({
      name: g.name,
      phases: g.phases.map((entries) => ({ series: entries })),
    })),
    warnings: [],
    enabled_parameters: ['alpha', 'beta', 'betan', 'lambda'],
  };
}

function naiveTrials(text: string): ParsedTrial[] {
  const trials: ParsedTrial[] = [];
  for (const chunk of text.split('/')) {
    const match = chunk.match(/^(\d*)([A-Z][A-Z'^0-9]*)([-+]{1,2})$/);
    if (!match) continue;
    trials.push({
      repeat: match[1] ? Number(match[1]) : 1,
      stimuli: match[2].match(/[A-Z]'?(\^\d+)?/g) ?? [],
      us: match[3],
    });
  }
  return trials;
}

/**
 * Fake SimApi: echoes phases back as canonical, rejects text containing '?'
 * with a positioned error, and returns queued (or default) responses.
 */
export class FakeApi implements SimApi {
  parseCalls: string[] = [];
  simulateCalls: { request: SimulationRequest; signal?: AbortSignal }[] = [];
  exportCalls: SimulationRequest[] = [];
  nextResponses: (() => Promise<SimulateResponse>)[] = [];
  defaultResponse: SimulateResponse = response([
    { name: 'G', phases: [[series('A', [0, 0.06])]] },
  ]);
  csv = 'Group,Phase\n';

  parsePhase(text: string): Promise<ParsePhaseResponse> {
    this.parseCalls.push(text);
    const bad = text.indexOf('?');
    if (bad >= 0) {
      return Promise.reject(
        new ServiceError([{ field: 'text', message: `unexpected '?' at position ${bad}` }]),
      );
    }
    return Promise.resolve({
      randomized: text.startsWith('rand'),
      beta_override: null,
      lambda_override: null,
      trials: naiveTrials(text),
      canonical: text,
    });
  }

  simulate(request: SimulationRequest, signal?: AbortSignal): Promise<SimulateResponse> {
    this.simulateCalls.push({ request, signal });
    const next = this.nextResponses.shift();
    if (next) return next();
    return Promise.resolve(this.defaultResponse);
  }

  exportCsv(request: SimulationRequest): Promise<string> {
    this.exportCalls.push(request);
    return Promise.resolve(this.csv);
  }
}
