/**
 * The edit-and-resimulate loop.
 *
 * Every accepted edit schedules one debounced simulation; a newer edit
 * supersedes the pending one and aborts any request still in flight, so at
 * most one simulation runs per edit generation.  Invalid cells block
 * simulation until fixed.
 */
import { ServiceError } from './api.js';
import type { SimulationRequest } from './api.js';
import { debounce } from './debounce.js';
import { DesignTable } from './designTable.js';
import { PlotState } from './plotState.js';
import type { FieldError, ParsePhaseResponse, SimulateResponse } from './types.js';

/** The slice of the service client the controller needs (eases test fakes). */
export interface SimApi {
  parsePhase(text: string): Promise<ParsePhaseResponse>;
  simulate(request: SimulationRequest, signal?: AbortSignal): Promise<SimulateResponse>;
  exportCsv(request: SimulationRequest): Promise<string>;
}

export interface RenderState {
  response: SimulateResponse | null;
  errors: FieldError[];
  pending: boolean;
}

export const DEBOUNCE_MS = 300;

function allLabels(response: SimulateResponse): string[] {
  const labels: string[] = [];
  const manyGroups = response.groups.length > 1;
  for (const group of response.groups) {
    for (const phase of group.phases) {
      for (const entry of phase.series) {
        labels.push(manyGroups ? `${group.name}: ${entry.name}` : entry.name);
      }
    }
  }
  return labels;
}

export class SimController {
  readonly table: DesignTable;
  readonly plot: PlotState;
  lastResponse: SimulateResponse | null = null;
  serviceErrors: FieldError[] = [];
  seed = 0;

  private readonly api: SimApi;
  private readonly onRender: (state: RenderState) => void;
  private readonly scheduled: { (): void; cancel(): void };
  private generation = 0;
  private inflight: AbortController | null = null;

  constructor(api: SimApi, onRender: (state: RenderState) => void = () => {}, debounceMs = DEBOUNCE_MS) {
    this.api = api;
    this.onRender = onRender;
    this.table = new DesignTable();
    this.plot = new PlotState();
    this.scheduled = debounce(() => {
      void this.simulateNow();
    }, debounceMs);
  }

  private render(pending = false): void {
    this.onRender({ response: this.lastResponse, errors: this.serviceErrors, pending });
  }

  /** Validate one cell against the service, then schedule or block. */
  async editCell(group: number, phase: number, text: string): Promise<void> {
    const cell = this.table.setCell(group, phase, text);
    if (text.trim() !== '') {
      try {
        const parsed = await this.api.parsePhase(text);
        if (this.table.groups[group]?.cells[phase] !== cell) return; // superseded
        cell.canonical = parsed.canonical;
        cell.trials = parsed.trials;
      } catch (err) {
        if (this.table.groups[group]?.cells[phase] !== cell) return;
        cell.error = err instanceof ServiceError ? err.errors[0].message : String(err);
      }
    }
    this.afterEdit();
  }

  editParameter(key: string, value: string): void {
    if (value.trim() === '') this.table.parameters.delete(key);
    else this.table.parameters.set(key, value.trim());
    this.afterEdit();
  }

  setModel(name: string): void {
    this.table.modelName = name;
    this.afterEdit();
  }

  setGroupName(index: number, name: string): void {
    this.table.setGroupName(index, name);
    this.afterEdit();
  }

  private afterEdit(): void {
    if (this.table.hasErrors()) {
      this.scheduled.cancel();
      this.inflight?.abort();
      this.inflight = null;
      this.render();
      return;
    }
    this.render(true);
    this.scheduled();
  }

  /** Run one simulation now, superseding anything in flight. */
  async simulateNow(): Promise<void> {
    const generation = ++this.generation;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.api.simulate(
        { experiment: this.table.toRw(), options: { seed: this.seed } },
        controller.signal,
      );
      if (generation !== this.generation) return;
      this.lastResponse = response;
      this.serviceErrors = [];
      this.plot.clampPhase(this.table.phaseCount);
      this.plot.prune(allLabels(response));
    } catch (err) {
      if (generation !== this.generation) return;
      if (err instanceof DOMException && err.name === 'AbortError') return;
      this.serviceErrors = err instanceof ServiceError
        ? err.errors
        : [{ field: 'service', message: String(err) }];
    } finally {
      if (generation === this.generation) {
        this.inflight = null;
        this.render();
      }
    }
  }

  /** Hide or restore a series.  Pure view change: no request. */
  toggleSeries(label: string): void {
    this.plot.toggle(label);
    this.render();
  }

  saveRw(): string {
    return this.table.toRw();
  }

  async exportCsv(): Promise<string> {
    return this.api.exportCsv({ experiment: this.table.toRw(), options: { seed: this.seed } });
  }

  /** Load `.rw` text: repopulate the table, validate cells, simulate once. */
  async loadRw(text: string): Promise<void> {
    this.table.loadRw(text);
    for (const group of this.table.groups) {
      for (const cell of group.cells) {
        if (cell.text.trim() === '') continue;
        try {
          const parsed = await this.api.parsePhase(cell.text);
          cell.canonical = parsed.canonical;
          cell.trials = parsed.trials;
        } catch (err) {
          cell.error = err instanceof ServiceError ? err.errors[0].message : String(err);
        }
      }
    }
    this.scheduled.cancel();
    if (this.table.hasErrors()) {
      this.render();
      return;
    }
    await this.simulateNow();
  }
}
