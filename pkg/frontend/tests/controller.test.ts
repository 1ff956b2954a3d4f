import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { SimController } from '../src/controller.js';
import type { SimulateResponse } from '../src/types.js';
import { FakeApi, LISTING, LISTING_CANONICAL, response, series } from './helpers.js';

beforeEach(() => vi.useFakeTimers());
afterEach(() => vi.useRealTimers());

function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

async function settle(): Promise<void> {
  await vi.advanceTimersByTimeAsync(300);
  await Promise.resolve();
}

describe('loading an experiment file', () => {
  it('repopulates the table with three groups, selects the model, simulates once', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    await controller.loadRw(LISTING);
    expect(controller.table.groups.map((g) => g.name)).toEqual([
      'Novel',
      'NegTransfer',
      'Change',
    ]);
    expect(controller.table.modelName).toBe("Le Pelley's Hybrid");
    expect(api.simulateCalls).toHaveLength(1);
    expect(controller.lastResponse).not.toBeNull();
  });

  it('Save reproduces the service serialization of the loaded listing', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    await controller.loadRw(LISTING);
    expect(controller.saveRw()).toBe(LISTING_CANONICAL);
    expect(api.simulateCalls[0].request.experiment).toBe(LISTING_CANONICAL);
  });
});

describe('edit-and-resimulate', () => {
  it('a burst of cell edits triggers exactly one debounced simulation', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    await controller.editCell(0, 0, '1A+');
    await controller.editCell(0, 0, '12A');
    await controller.editCell(0, 0, '12A+');
    expect(api.simulateCalls).toHaveLength(0);
    await settle();
    expect(api.simulateCalls).toHaveLength(1);
    expect(api.simulateCalls[0].request.experiment).toBe('G|12A+\n');
  });

  it('parameter and model edits also resimulate, once per burst', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    await controller.editCell(0, 0, '2A+');
    await settle();
    controller.editParameter('lambda', '0.9');
    controller.setModel('Pearce Kaye Hall');
    await settle();
    expect(api.simulateCalls).toHaveLength(2);
    expect(api.simulateCalls[1].request.experiment).toBe(
      '@model=Pearce Kaye Hall\n@lambda=0.9\nG|2A+\n',
    );
  });

  it('an invalid cell blocks simulation until fixed', async () => {
    const api = new FakeApi();
    const states: boolean[] = [];
    const controller = new SimController(api, (s) => states.push(s.pending));
    controller.table.addGroup('G');
    await controller.editCell(0, 0, '2A?');
    await settle();
    expect(controller.table.groups[0].cells[0].error).toMatch(/position 2/);
    expect(api.simulateCalls).toHaveLength(0);

    await controller.editCell(0, 0, '2A+');
    await settle();
    expect(controller.table.groups[0].cells[0].error).toBeNull();
    expect(api.simulateCalls).toHaveLength(1);
    expect(states).toContain(true);
  });

  it('a newer simulation supersedes and aborts the one in flight', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    controller.table.setCell(0, 0, '2A+').canonical = '2A+';

    const first = deferred<SimulateResponse>();
    const winner = response([{ name: 'G', phases: [[series('A', [0, 0.9])]] }]);
    api.nextResponses = [() => first.promise, () => Promise.resolve(winner)];

    const p1 = controller.simulateNow();
    const p2 = controller.simulateNow();
    expect(api.simulateCalls[0].signal?.aborted).toBe(true);
    first.reject(new DOMException('aborted', 'AbortError'));
    await Promise.all([p1, p2]);
    expect(controller.lastResponse).toBe(winner);
    expect(controller.serviceErrors).toEqual([]);
  });

  it('a stale response arriving late never overwrites the newer one', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    controller.table.setCell(0, 0, '2A+').canonical = '2A+';

    const slow = deferred<SimulateResponse>();
    const stale = response([{ name: 'G', phases: [[series('A', [0.1])]] }]);
    const fresh = response([{ name: 'G', phases: [[series('A', [0.2])]] }]);
    api.nextResponses = [() => slow.promise, () => Promise.resolve(fresh)];

    const p1 = controller.simulateNow();
    await controller.simulateNow();
    slow.resolve(stale);
    await p1;
    expect(controller.lastResponse).toBe(fresh);
  });

  it('service errors surface without clobbering recovery', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    controller.table.setCell(0, 0, '2A+').canonical = '2A+';
    api.nextResponses = [
      () =>
        Promise.reject(
          new (class extends Error {})('boom'),
        ),
    ];
    await controller.simulateNow();
    expect(controller.serviceErrors[0].message).toMatch(/boom/);
    await controller.simulateNow();
    expect(controller.serviceErrors).toEqual([]);
  });
});

describe('legend interaction', () => {
  it('toggling a series hides it without a new request', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    await controller.loadRw(LISTING);
    const before = api.simulateCalls.length;
    controller.toggleSeries('Novel: A');
    expect(controller.plot.isHidden('Novel: A')).toBe(true);
    controller.toggleSeries('Novel: A');
    expect(controller.plot.isHidden('Novel: A')).toBe(false);
    expect(api.simulateCalls).toHaveLength(before);
  });

  it('hidden series persist across re-simulations while they exist', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    controller.table.addGroup('G');
    api.defaultResponse = response([
      { name: 'G', phases: [[series('A', [0.1]), series('B', [0.2])]] },
    ]);
    await controller.editCell(0, 0, '2AB+');
    await settle();
    controller.toggleSeries('B');

    await controller.editCell(0, 0, '3AB+');
    await settle();
    expect(controller.plot.isHidden('B')).toBe(true);

    api.defaultResponse = response([{ name: 'G', phases: [[series('A', [0.1])]] }]);
    await controller.editCell(0, 0, '3A+');
    await settle();
    expect(controller.plot.isHidden('B')).toBe(false);
  });
});

describe('export', () => {
  it('passes the current design through to the CSV endpoint', async () => {
    const api = new FakeApi();
    const controller = new SimController(api);
    await controller.loadRw(LISTING);
    const csv = await controller.exportCsv();
    expect(csv).toBe(api.csv);
    expect(api.exportCalls[0].experiment).toBe(LISTING_CANONICAL);
  });
});
