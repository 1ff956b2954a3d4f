/**
 * Shapes of the simulation service's v1 JSON payloads.
 */

export interface ModelInfo {
  name: string;
  enabled_parameters: string[];
  defaults: Record<string, number | boolean>;
  bounds: Record<string, [number, number]>;
}

/** One plotted line: a CS, configural cue, compound, or trial type. */
export interface SeriesEntry {
  name: string;
  kind: 'cs' | 'configural' | 'compound' | 'trial-type';
  v?: number[];
  v_e?: number[];
  v_i?: number[];
  alpha?: number[];
  alpha_mack?: number[];
  alpha_hall?: number[];
}

export interface PhasePayload {
  series: SeriesEntry[];
}

export interface GroupPayload {
  name: string;
  phases: PhasePayload[];
}

export interface SimulateResponse {
  model_name: string;
  seed: number;
  groups: GroupPayload[];
  warnings: string[];
  enabled_parameters: string[];
}

export interface ParsedTrial {
  repeat: number;
  stimuli: string[];
  us: string;
}

export interface ParsePhaseResponse {
  randomized: boolean;
  beta_override: number | null;
  lambda_override: number | null;
  trials: ParsedTrial[];
  canonical: string;
}

export interface FieldError {
  field: string;
  message: string;
}
