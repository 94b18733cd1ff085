// DOM rendering. Displayed numbers are formatted copies of response
// values; each value-bearing element carries the raw response number in
// data-value so tests can check the display against intercepted bodies.

import type { BandSeries, ComparisonModel, TornadoEntry } from './panels';

export function fmtMoney(value: number): string {
  return `€${value.toFixed(2)}`;
}

export function fmtRatio(value: number | null): string {
  return value === null ? '–' : value.toFixed(2);
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function valueCell(tag: string, raw: number | null, text: string, className?: string): HTMLElement {
  const node = el(tag, className, text);
  if (raw !== null) node.dataset.value = String(raw);
  return node;
}

export function renderComparison(root: HTMLElement, model: ComparisonModel): void {
  root.textContent = '';
  const table = el('table', 'kpi-table');
  const head = el('tr');
  for (const title of ['Scenario', 'NPV (€/yr)', 'BCR', 'ROI', '']) {
    head.appendChild(el('th', undefined, title));
  }
  table.appendChild(head);

  for (const row of model.rows) {
    const tr = el('tr', row.negative ? 'scenario-row negative-npv' : 'scenario-row');
    tr.dataset.scenario = row.scenarioId;
    tr.appendChild(el('td', 'scenario-label', row.label));
    tr.appendChild(valueCell('td', row.npv, fmtMoney(row.npv), 'npv'));
    tr.appendChild(valueCell('td', row.bcr, fmtRatio(row.bcr), 'bcr'));
    tr.appendChild(valueCell('td', row.roi, fmtRatio(row.roi), 'roi'));
    const badgeCell = el('td');
    if (row.recommended) {
      badgeCell.appendChild(el('span', 'badge recommended', 'recommended'));
    }
    tr.appendChild(badgeCell);
    table.appendChild(tr);
  }
  root.appendChild(table);

  if (model.notes.length) {
    const notes = el('ul', 'notes');
    for (const note of model.notes) notes.appendChild(el('li', undefined, note));
    root.appendChild(notes);
  }

  if (model.deviations.length) {
    root.appendChild(el('h3', undefined, 'Deviations from published aggregates'));
    const list = el('ul', 'deviation-ledger');
    for (const dev of model.deviations) {
      const item = el('li', 'deviation');
      item.appendChild(el('span', 'metric', `${dev.scenarioId} ${dev.metric}: `));
      item.appendChild(
        valueCell('span', dev.computed, dev.computed === null ? '–' : `computed ${dev.computed}`, 'computed'),
      );
      item.appendChild(valueCell('span', dev.reported, ` vs reported ${dev.reported}`, 'reported'));
      list.appendChild(item);
    }
    root.appendChild(list);
  }
}

export function renderTornado(root: HTMLElement, entries: TornadoEntry[]): void {
  root.textContent = '';
  if (!entries.length) {
    root.appendChild(el('p', 'empty', 'No sensitivity data'));
    return;
  }
  const spans = entries.map((e) => Math.abs(e.delta));
  const widest = Math.max(...spans, 1e-9);
  const list = el('div', 'tornado');
  for (const entry of entries) {
    const row = el('div', 'tornado-row');
    row.dataset.control = entry.control;
    row.appendChild(el('span', 'tornado-label', entry.label));
    const bar = el('div', 'tornado-bar');
    bar.style.width = `${(Math.abs(entry.delta) / widest) * 100}%`;
    row.appendChild(bar);
    row.appendChild(valueCell('span', entry.npvLow, fmtMoney(entry.npvLow), 'npv-low'));
    row.appendChild(valueCell('span', entry.npvHigh, fmtMoney(entry.npvHigh), 'npv-high'));
    list.appendChild(row);
  }
  root.appendChild(list);
}

const BAND_WIDTH = 640;
const BAND_HEIGHT = 260;
const SVG_NS = 'http://www.w3.org/2000/svg';

export function renderBand(root: HTMLElement, series: BandSeries): void {
  root.textContent = '';
  const values = [...series.lower, ...series.upper, 0];
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const spanY = hi - lo || 1;
  const spanX = series.years[series.years.length - 1] - series.years[0] || 1;
  const x = (year: number) => ((year - series.years[0]) / spanX) * BAND_WIDTH;
  const y = (value: number) => BAND_HEIGHT - ((value - lo) / spanY) * BAND_HEIGHT;

  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${BAND_WIDTH} ${BAND_HEIGHT}`);
  svg.setAttribute('class', 'band-chart');

  const bandPoints = series.years.map((year, i) => `${x(year)},${y(series.upper[i])}`);
  for (let i = series.years.length - 1; i >= 0; i -= 1) {
    bandPoints.push(`${x(series.years[i])},${y(series.lower[i])}`);
  }
  const band = document.createElementNS(SVG_NS, 'polygon');
  band.setAttribute('points', bandPoints.join(' '));
  band.setAttribute('class', 'band-fill');
  svg.appendChild(band);

  const zero = document.createElementNS(SVG_NS, 'line');
  zero.setAttribute('x1', '0');
  zero.setAttribute('x2', String(BAND_WIDTH));
  zero.setAttribute('y1', String(y(0)));
  zero.setAttribute('y2', String(y(0)));
  zero.setAttribute('class', 'zero-line');
  svg.appendChild(zero);

  const meanLine = document.createElementNS(SVG_NS, 'polyline');
  meanLine.setAttribute('points', series.years.map((year, i) => `${x(year)},${y(series.mean[i])}`).join(' '));
  meanLine.setAttribute('class', 'mean-line');
  svg.appendChild(meanLine);

  root.appendChild(svg);

  const terminal = series.mean[series.mean.length - 1];
  const summary = valueCell(
    'p',
    terminal,
    `cumulative NPV after ${series.years[series.years.length - 1]} years: ${fmtMoney(terminal)}`,
    series.terminalNegative ? 'band-terminal negative' : 'band-terminal',
  );
  root.appendChild(summary);
}

export function renderError(root: HTMLElement, message: string): void {
  root.textContent = '';
  root.appendChild(el('p', 'panel-error', message));
}

export function renderLoading(root: HTMLElement): void {
  // A loading panel never shows data from an older control state: the
  // previous content is replaced by an explicit placeholder.
  root.textContent = '';
  root.appendChild(el('p', 'panel-loading', 'Loading…'));
}
