/**
 * Render series as an SVG string.  Only coordinate scaling happens here;
 * the plotted numbers come verbatim from the service.
 */
import type { PlotSeries } from './series.js';

const PALETTE = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b',
  '#e377c2', '#7f7f7f', '#bcbd22', '#17becf',
];

export interface PlotOptions {
  width?: number;
  height?: number;
  yLabel?: string;
}

const MARGIN = { left: 42, right: 12, top: 12, bottom: 28 };

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export function renderPlot(
  series: PlotSeries[],
  hidden: Set<string>,
  options: PlotOptions = {},
): string {
  const width = options.width ?? 640;
  const height = options.height ?? 360;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  const visible = series.filter((s) => !hidden.has(s.label));
  const maxLen = Math.max(1, ...visible.map((s) => s.values.length));
  let lo = Math.min(0, ...visible.flatMap((s) => s.values));
  let hi = Math.max(0, ...visible.flatMap((s) => s.values));
  if (hi === lo) hi = lo + 1;
  const pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;

  const x = (i: number) => MARGIN.left + (maxLen === 1 ? 0 : (i / (maxLen - 1)) * innerW);
  const y = (v: number) => MARGIN.top + (1 - (v - lo) / (hi - lo)) * innerH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" role="img">`,
  );
  const axisY = y(Math.max(lo, Math.min(hi, 0)));
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + innerH}" stroke="#444"/>`,
    `<line x1="${MARGIN.left}" y1="${axisY.toFixed(2)}" x2="${MARGIN.left + innerW}" ` +
      `y2="${axisY.toFixed(2)}" stroke="#444"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left - 6}" y="${y(hi - pad).toFixed(2)}" text-anchor="end" ` +
      `font-size="10">${(hi - pad).toFixed(2)}</text>`,
    `<text x="${MARGIN.left - 6}" y="${y(lo + pad).toFixed(2)}" text-anchor="end" ` +
      `font-size="10">${(lo + pad).toFixed(2)}</text>`,
  );
  if (options.yLabel) {
    parts.push(
      `<text x="12" y="${MARGIN.top + innerH / 2}" font-size="11" ` +
        `transform="rotate(-90 12 ${MARGIN.top + innerH / 2})" ` +
        `text-anchor="middle">${esc(options.yLabel)}</text>`,
    );
  }

  series.forEach((s, index) => {
    if (hidden.has(s.label) || s.values.length === 0) return;
    const points = s.values.map((v, i) => `${x(i).toFixed(2)},${y(v).toFixed(2)}`).join(' ');
    const dash = s.kind === 'trial-type' ? ' stroke-dasharray="5 3"' : '';
    parts.push(
      `<polyline data-series="${esc(s.label)}" points="${points}" fill="none" ` +
        `stroke="${seriesColor(index)}" stroke-width="1.5"${dash}/>`,
    );
  });
  parts.push('</svg>');
  return parts.join('');
}
