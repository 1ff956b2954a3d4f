/**
 * Editable group-by-phase design grid state.
 *
 * Cells hold raw text plus the service's verdict: a canonical form once
 * validated, or a positioned error message.  The table never interprets
 * phase strings itself.
 */
import { parseRwText, serializeRwText } from './rwText.js';
import type { ParsedTrial } from './types.js';

export interface CellState {
  text: string;
  /** Service-canonical phase string, null until validated or after an edit. */
  canonical: string | null;
  error: string | null;
  trials: ParsedTrial[];
}

export interface GroupRow {
  name: string;
  cells: CellState[];
}

function freshCell(text = ''): CellState {
  return { text, canonical: text === '' ? '' : null, error: null, trials: [] };
}

export class DesignTable {
  modelName: string | null = null;
  parameters = new Map<string, string>();
  groups: GroupRow[] = [];

  get phaseCount(): number {
    return Math.max(0, ...this.groups.map((g) => g.cells.length));
  }

  addGroup(name?: string): void {
    const cells = Array.from({ length: Math.max(1, this.phaseCount) }, () => freshCell());
    this.groups.push({ name: name ?? `Group ${this.groups.length + 1}`, cells });
  }

  removeGroup(index: number): void {
    this.groups.splice(index, 1);
  }

  addPhase(): void {
    for (const group of this.groups) group.cells.push(freshCell());
  }

  removePhase(index: number): void {
    for (const group of this.groups) group.cells.splice(index, 1);
  }

  setGroupName(index: number, name: string): void {
    this.groups[index].name = name;
  }

  setCell(group: number, phase: number, text: string): CellState {
    const cell = freshCell(text);
    this.groups[group].cells[phase] = cell;
    return cell;
  }

  /** Add or strip the randomization prefix of a cell, returning the new text. */
  toggleRandom(group: number, phase: number): string {
    const old = this.groups[group].cells[phase].text.trim();
    let next: string;
    if (old === 'rand' || old.startsWith('rand/')) next = old === 'rand' ? '' : old.slice(5);
    else next = old === '' ? old : 'rand/' + old;
    this.setCell(group, phase, next);
    return next;
  }

  hasErrors(): boolean {
    return this.groups.some((g) => g.cells.some((c) => c.error !== null));
  }

  /** Sorted unique stimuli across all validated cells. */
  stimuli(): string[] {
    const seen = new Set<string>();
    for (const group of this.groups) {
      for (const cell of group.cells) {
        for (const trial of cell.trials) for (const s of trial.stimuli) seen.add(s);
      }
    }
    return [...seen].sort();
  }

  /** Compound labels (joined stimuli) across validated cells, for q-cue parameters. */
  compounds(): string[] {
    const seen = new Set<string>();
    for (const group of this.groups) {
      for (const cell of group.cells) {
        for (const trial of cell.trials) {
          if (trial.stimuli.length > 1) seen.add(trial.stimuli.join(''));
        }
      }
    }
    return [...seen].sort();
  }

  loadRw(text: string): void {
    const doc = parseRwText(text);
    this.modelName = doc.modelName;
    this.parameters = doc.parameters;
    this.groups = doc.groups.map((g) => ({
      name: g.name,
      cells: g.cells.map((c) => freshCell(c)),
    }));
  }

  /** `.rw` text using canonical cell forms where known. */
  toRw(): string {
    return serializeRwText({
      modelName: this.modelName,
      parameters: this.parameters,
      groups: this.groups.map((g) => ({
        name: g.name,
        cells: g.cells.map((c) => c.canonical ?? c.text),
      })),
    });
  }
}
