/**
 * DOM wiring: design grid, parameter panels, plot, legend, file buttons.
 * All state lives in SimController/DesignTable/PlotState; this file only
 * reflects it into elements and forwards events back.
 */
import { ApiClient } from './api.js';
import { SimController } from './controller.js';
import type { RenderState } from './controller.js';
import type { Quantity } from './plotState.js';
import { assembleSeries } from './series.js';
import { renderPlot, seriesColor } from './svgPlot.js';
import type { ModelInfo } from './types.js';

const QUANTITY_LABELS: Record<Quantity, string> = {
  v: 'V',
  v_e: 'V (excitatory)',
  v_i: 'V (inhibitory)',
  alpha: 'alpha',
  alpha_mack: 'alpha (Mackintosh)',
  alpha_hall: 'alpha (Hall)',
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function download(filename: string, content: string, type: string): void {
  const url = URL.createObjectURL(new Blob([content], { type }));
  const link = el('a', { href: url, download: filename });
  link.click();
  URL.revokeObjectURL(url);
}

class App {
  private readonly controller: SimController;
  private readonly api: ApiClient;
  private models: ModelInfo[] = [];
  private readonly root: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
    this.controller = new SimController(api, (state) => this.renderOutput(state));
  }

  async start(): Promise<void> {
    this.models = await this.api.models().catch(() => []);
    this.controller.table.modelName = this.models[0]?.name ?? null;
    this.controller.table.addGroup('Group 1');
    this.buildChrome();
    this.renderTable();
    this.renderParameters();
  }

  private get table() {
    return this.controller.table;
  }

  private get plot() {
    return this.controller.plot;
  }

  // Static layout built once; dynamic regions re-rendered on change.
  private buildChrome(): void {
    this.root.replaceChildren();
    const toolbar = el('div', { class: 'toolbar' });

    const modelSelect = el('select', { id: 'model-select' });
    for (const model of this.models) {
      modelSelect.appendChild(el('option', { value: model.name }, model.name));
    }
    modelSelect.onchange = () => {
      this.controller.setModel(modelSelect.value);
      this.renderParameters();
    };
    toolbar.append('Model: ', modelSelect);

    const saveBtn = el('button', {}, 'Save File');
    saveBtn.onclick = () => download('experiment.rw', this.controller.saveRw(), 'text/plain');
    const loadInput = el('input', { type: 'file', accept: '.rw', style: 'display:none' });
    loadInput.onchange = async () => {
      const file = loadInput.files?.[0];
      if (!file) return;
      await this.controller.loadRw(await file.text());
      const select = this.root.querySelector<HTMLSelectElement>('#model-select');
      if (select && this.table.modelName) select.value = this.table.modelName;
      this.renderTable();
      this.renderParameters();
    };
    const loadBtn = el('button', {}, 'Load Experiment');
    loadBtn.onclick = () => loadInput.click();
    const exportBtn = el('button', {}, 'Export CSV');
    exportBtn.onclick = async () => {
      try {
        download('results.csv', await this.controller.exportCsv(), 'text/csv');
      } catch (err) {
        this.setStatus(String(err));
      }
    };
    toolbar.append(' ', saveBtn, loadBtn, loadInput, exportBtn);
    this.root.appendChild(toolbar);

    this.root.appendChild(el('div', { id: 'design' }));
    this.root.appendChild(el('div', { id: 'parameters' }));
    this.root.appendChild(el('div', { id: 'status', class: 'status' }));
    this.root.appendChild(el('div', { id: 'plot-area' }));
    this.root.appendChild(el('div', { id: 'legend' }));
  }

  private setStatus(text: string): void {
    const status = this.root.querySelector('#status');
    if (status) status.textContent = text;
  }

  private renderTable(): void {
    const host = this.root.querySelector('#design');
    if (!host) return;
    const grid = el('table', { class: 'design-grid' });
    const header = el('tr');
    header.appendChild(el('th', {}, 'Group'));
    for (let p = 0; p < this.table.phaseCount; p++) {
      const th = el('th', {}, `Phase ${p + 1} `);
      const drop = el('button', { title: 'remove phase' }, 'x');
      drop.onclick = () => {
        this.table.removePhase(p);
        this.plot.clampPhase(this.table.phaseCount);
        this.renderTable();
      };
      th.appendChild(drop);
      header.appendChild(th);
    }
    grid.appendChild(header);

    this.table.groups.forEach((group, g) => {
      const row = el('tr');
      const nameCell = el('td');
      const nameInput = el('input', { value: group.name, class: 'group-name' });
      nameInput.onchange = () => this.controller.setGroupName(g, nameInput.value);
      const drop = el('button', { title: 'remove group' }, 'x');
      drop.onclick = () => {
        this.table.removeGroup(g);
        this.renderTable();
      };
      nameCell.append(nameInput, drop);
      row.appendChild(nameCell);

      group.cells.forEach((cell, p) => {
        const td = el('td', { class: cell.error ? 'cell invalid' : 'cell' });
        const input = el('input', { value: cell.text, 'data-cell': `${g}:${p}` });
        input.oninput = async () => {
          await this.controller.editCell(g, p, input.value);
          td.className = this.table.groups[g]?.cells[p]?.error ? 'cell invalid' : 'cell';
          const msg = td.querySelector('.cell-error');
          if (msg) msg.textContent = this.table.groups[g]?.cells[p]?.error ?? '';
          this.renderParameters();
        };
        const rand = el('button', { title: 'toggle randomization' }, 'rand');
        rand.onclick = () => {
          const text = this.table.toggleRandom(g, p);
          input.value = text;
          void this.controller.editCell(g, p, text);
        };
        td.append(input, rand, el('div', { class: 'cell-error' }, cell.error ?? ''));
        row.appendChild(td);
      });
      grid.appendChild(row);
    });

    const controls = el('div');
    const addGroup = el('button', {}, 'Add group');
    addGroup.onclick = () => {
      this.table.addGroup();
      this.renderTable();
    };
    const addPhase = el('button', {}, 'Add phase');
    addPhase.onclick = () => {
      this.table.addPhase();
      this.renderTable();
    };
    controls.append(addGroup, addPhase);
    host.replaceChildren(grid, controls);
  }

  private renderParameters(): void {
    const host = this.root.querySelector('#parameters');
    if (!host) return;
    const info = this.models.find((m) => m.name === this.table.modelName);
    host.replaceChildren();
    if (!info) return;

    const panel = el('fieldset');
    panel.appendChild(el('legend', {}, 'Parameters'));
    const enabled = new Set(info.enabled_parameters);
    for (const [key, fallback] of Object.entries(info.defaults)) {
      if (typeof fallback === 'boolean') continue;
      const row = el('label', { class: 'param' }, `${key} `);
      const input = el('input', {
        type: 'number',
        step: 'any',
        value: this.table.parameters.get(key) ?? String(fallback),
      });
      if (!enabled.has(key)) {
        input.disabled = true;
        row.classList.add('disabled');
      } else {
        input.onchange = () => this.controller.editParameter(key, input.value);
      }
      row.appendChild(input);
      panel.appendChild(row);
    }

    const configural = el('label', { class: 'param' }, 'configural cues ');
    const configuralBox = el('input', { type: 'checkbox' });
    configuralBox.checked = this.table.parameters.get('configural_cues') === 'true';
    configuralBox.onchange = () =>
      this.controller.editParameter('configural_cues', configuralBox.checked ? 'true' : '');
    configural.appendChild(configuralBox);
    panel.appendChild(configural);
    host.appendChild(panel);

    // Per-CS rates for stimuli actually present, plus q-cues when configural.
    const stimuli = this.table.stimuli();
    if (stimuli.length > 0) {
      const perCs = el('fieldset');
      perCs.appendChild(el('legend', {}, 'Per-CS parameters'));
      const keys = stimuli.map((s) => `alpha_${s}`);
      if (configuralBox.checked) {
        keys.push(...this.table.compounds().map((c) => `alpha_q(${c})`));
      }
      for (const key of keys) {
        const row = el('label', { class: 'param' }, `${key} `);
        const input = el('input', {
          type: 'number',
          step: 'any',
          value: this.table.parameters.get(key) ?? '',
        });
        input.onchange = () => this.controller.editParameter(key, input.value);
        row.appendChild(input);
        perCs.appendChild(row);
      }
      host.appendChild(perCs);
    }
  }

  private quantityOptions(): Quantity[] {
    const response = this.controller.lastResponse;
    if (!response) return ['v'];
    const present = new Set<string>();
    for (const group of response.groups) {
      for (const phase of group.phases) {
        for (const entry of phase.series) {
          for (const key of Object.keys(QUANTITY_LABELS)) {
            if (key in entry) present.add(key);
          }
        }
      }
    }
    return (Object.keys(QUANTITY_LABELS) as Quantity[]).filter((q) => present.has(q));
  }

  private renderOutput(state: RenderState): void {
    this.setStatus(
      state.pending
        ? 'simulating...'
        : state.errors.map((e) => `${e.field}: ${e.message}`).join('; '),
    );
    const host = this.root.querySelector('#plot-area');
    const legendHost = this.root.querySelector('#legend');
    if (!host || !legendHost) return;
    if (!state.response) {
      host.replaceChildren();
      legendHost.replaceChildren();
      return;
    }

    const quantities = this.quantityOptions();
    if (!quantities.includes(this.plot.quantity)) this.plot.quantity = quantities[0] ?? 'v';
    const series = assembleSeries(
      state.response,
      this.plot.phaseIndex,
      this.plot.quantity,
      this.plot.showTrialTypes,
    );

    const controls = el('div', { class: 'plot-controls' });
    const prev = el('button', {}, '←');
    prev.disabled = !this.plot.canPrev();
    prev.onclick = () => {
      this.plot.prevPhase();
      this.renderOutput(state);
    };
    const next = el('button', {}, '→');
    next.disabled = !this.plot.canNext(this.table.phaseCount);
    next.onclick = () => {
      this.plot.nextPhase(this.table.phaseCount);
      this.renderOutput(state);
    };
    const quantitySelect = el('select');
    for (const q of quantities) {
      const option = el('option', { value: q }, QUANTITY_LABELS[q]);
      option.selected = q === this.plot.quantity;
      quantitySelect.appendChild(option);
    }
    quantitySelect.onchange = () => {
      this.plot.quantity = quantitySelect.value as Quantity;
      this.renderOutput(state);
    };
    const trialTypes = el('label', {}, ' trial types ');
    const trialBox = el('input', { type: 'checkbox' });
    trialBox.checked = this.plot.showTrialTypes;
    trialBox.onchange = () => {
      this.plot.showTrialTypes = trialBox.checked;
      this.renderOutput(state);
    };
    trialTypes.appendChild(trialBox);
    controls.append(
      prev,
      ` Phase ${this.plot.phaseIndex + 1} / ${Math.max(1, this.table.phaseCount)} `,
      next,
      ' ',
      quantitySelect,
      trialTypes,
    );

    const svgHost = el('div');
    svgHost.innerHTML = renderPlot(series, new Set(this.plot.hiddenLabels()), {
      yLabel: QUANTITY_LABELS[this.plot.quantity],
    });
    host.replaceChildren(controls, svgHost);

    this.renderLegend(legendHost, series.map((s) => s.label));
  }

  private renderLegend(host: Element, labels: string[]): void {
    host.replaceChildren();
    const page = this.plot.pageLabels(labels);
    const list = el('div', { class: 'legend-entries' });
    for (const label of page) {
      const index = labels.indexOf(label);
      const entry = el('span', {
        class: this.plot.isHidden(label) ? 'legend-entry hidden' : 'legend-entry',
        style: `color: ${seriesColor(index)}`,
      }, label);
      entry.onclick = () => this.controller.toggleSeries(label);
      list.appendChild(entry);
    }
    host.appendChild(list);

    const pages = this.plot.pageCount(labels.length);
    if (pages > 1) {
      const nav = el('div', { class: 'legend-pages' });
      const back = el('button', {}, '<');
      back.disabled = this.plot.legendPage === 0;
      back.onclick = () => {
        this.plot.legendPage -= 1;
        this.renderLegend(host, labels);
      };
      const fwd = el('button', {}, '>');
      fwd.disabled = this.plot.legendPage >= pages - 1;
      fwd.onclick = () => {
        this.plot.legendPage += 1;
        this.renderLegend(host, labels);
      };
      nav.append(back, ` ${this.plot.legendPage + 1} / ${pages} `, fwd);
      host.appendChild(nav);
    }
  }
}

const root = document.getElementById('app');
if (root) {
  void new App(root, new ApiClient()).start();
}
