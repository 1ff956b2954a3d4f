/**
 * Textual `.rw` file handling for load and save.
 *
 * This is structural line splitting only: `@` lines carry parameters, every
 * other line is `GroupName|phase|phase|...`.  Phase strings are opaque here;
 * the service parses and canonicalizes them.
 */

export interface RwDocument {
  modelName: string | null;
  /** Insertion-ordered `@key=value` parameters, model excluded. */
  parameters: Map<string, string>;
  groups: { name: string; cells: string[] }[];
}

export function parseRwText(text: string): RwDocument {
  const doc: RwDocument = { modelName: null, parameters: new Map(), groups: [] };
  for (const raw of text.split(/\r\n|\n/)) {
    const line = raw.trim();
    if (!line) continue;
    if (line.startsWith('@')) {
      for (const pair of line.slice(1).split(';')) {
        const eq = pair.indexOf('=');
        if (eq < 0) throw new Error(`malformed parameter ${JSON.stringify(pair.trim())}`);
        const key = pair.slice(0, eq).trim();
        const value = pair.slice(eq + 1).trim();
        if (key === 'model') doc.modelName = value;
        else doc.parameters.set(key, value);
      }
      continue;
    }
    const cells = line.split('|');
    doc.groups.push({ name: cells[0].trim(), cells: cells.slice(1).map((c) => c.trim()) });
  }
  const width = Math.max(0, ...doc.groups.map((g) => g.cells.length));
  for (const group of doc.groups) {
    while (group.cells.length < width) group.cells.push('');
  }
  return doc;
}

/** Serialize in the same layout the service writes: one @model line, one merged @ parameter line, then the group rows, LF endings. */
export function serializeRwText(doc: RwDocument): string {
  const lines: string[] = [];
  if (doc.modelName !== null) lines.push(`@model=${doc.modelName}`);
  if (doc.parameters.size > 0) {
    lines.push('@' + [...doc.parameters].map(([k, v]) => `${k}=${v}`).join(';'));
  }
  const width = Math.max(0, ...doc.groups.map((g) => g.cells.length));
  for (const group of doc.groups) {
    if (group.name.includes('|')) throw new Error(`group name ${JSON.stringify(group.name)} cannot contain '|'`);
    const cells = [...group.cells];
    while (cells.length < width) cells.push('');
    lines.push([group.name, ...cells].join('|'));
  }
  return lines.length ? lines.join('\n') + '\n' : '';
}
