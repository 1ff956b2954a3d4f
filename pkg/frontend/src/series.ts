/**
 * Select the plottable lines for one phase and quantity from a simulation
 * response.  Values are passed through untouched.
 */
import type { Quantity } from './plotState.js';
import type { SimulateResponse } from './types.js';

export interface PlotSeries {
  label: string;
  kind: string;
  values: number[];
}

export function assembleSeries(
  response: SimulateResponse,
  phaseIndex: number,
  quantity: Quantity,
  showTrialTypes: boolean,
): PlotSeries[] {
  const out: PlotSeries[] = [];
  const manyGroups = response.groups.length > 1;
  for (const group of response.groups) {
    const phase = group.phases[phaseIndex];
    if (!phase) continue;
    for (const entry of phase.series) {
      if (entry.kind === 'trial-type' && !showTrialTypes) continue;
      if (entry.kind === 'compound' && quantity !== 'v') continue;
      const values = entry[quantity];
      if (!values || values.length === 0) continue;
      const label = manyGroups ? `${group.name}: ${entry.name}` : entry.name;
      out.push({ label, kind: entry.kind, values });
    }
  }
  return out;
}
