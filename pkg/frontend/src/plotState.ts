/**
 * View state for the per-phase plots: which phase, which quantity, which
 * series are hidden, and legend pagination.
 */

export type Quantity = 'v' | 'v_e' | 'v_i' | 'alpha' | 'alpha_mack' | 'alpha_hall';

export const LEGEND_PAGE_SIZE = 20;

export class PlotState {
  phaseIndex = 0;
  quantity: Quantity = 'v';
  showTrialTypes = false;
  legendPage = 0;
  private hidden = new Set<string>();

  isHidden(label: string): boolean {
    return this.hidden.has(label);
  }

  toggle(label: string): void {
    if (this.hidden.has(label)) this.hidden.delete(label);
    else this.hidden.add(label);
  }

  hiddenLabels(): string[] {
    return [...this.hidden].sort();
  }

  /** Keep hidden-state only for series that still exist after a re-simulation. */
  prune(existing: Iterable<string>): void {
    const keep = new Set(existing);
    for (const label of [...this.hidden]) {
      if (!keep.has(label)) this.hidden.delete(label);
    }
  }

  canPrev(): boolean {
    return this.phaseIndex > 0;
  }

  canNext(phaseCount: number): boolean {
    return this.phaseIndex < phaseCount - 1;
  }

  prevPhase(): void {
    if (this.canPrev()) this.phaseIndex -= 1;
  }

  nextPhase(phaseCount: number): void {
    if (this.canNext(phaseCount)) this.phaseIndex += 1;
  }

  clampPhase(phaseCount: number): void {
    this.phaseIndex = Math.min(this.phaseIndex, Math.max(0, phaseCount - 1));
  }

  pageCount(labelCount: number): number {
    return Math.max(1, Math.ceil(labelCount / LEGEND_PAGE_SIZE));
  }

  /** Labels visible on the current legend page, clamping the page in range. */
  pageLabels(labels: string[]): string[] {
    this.legendPage = Math.min(this.legendPage, this.pageCount(labels.length) - 1);
    const start = this.legendPage * LEGEND_PAGE_SIZE;
    return labels.slice(start, start + LEGEND_PAGE_SIZE);
  }
}
