// Application wiring: dataset picker, control sliders, panel rendering.

import { ApiClient } from './api';
import { buildBand, buildComparison } from './panels';
import { renderBand, renderComparison, renderError, renderLoading, renderTornado } from './render';
import { ExplorerController, WhatIfState } from './state';
import type { ControlName } from './types';

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('api');
  if (fromQuery) return fromQuery.replace(/\/$/, '');
  return 'http://127.0.0.1:8080';
}

function panelRoot(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing panel element #${id}`);
  return node;
}

export function renderState(state: WhatIfState): void {
  const comparison = panelRoot('comparison-panel');
  const tornado = panelRoot('tornado-panel');
  const band = panelRoot('band-panel');

  const panels = [
    { panel: state.panels.comparison, root: comparison, render: () => renderComparison(comparison, buildComparison(state.panels.comparison.data!)) },
    { panel: state.panels.tornado, root: tornado, render: () => renderTornado(tornado, state.panels.tornado.data!) },
    { panel: state.panels.band, root: band, render: () => renderBand(band, buildBand(state.panels.band.data!)) },
  ];
  for (const { panel, root, render } of panels) {
    if (panel.status === 'ready' && panel.data) render();
    else if (panel.status === 'error') renderError(root, panel.error ?? 'request failed');
    else renderLoading(root);
  }
}

function renderControls(controller: ExplorerController): void {
  const root = panelRoot('controls');
  root.textContent = '';
  for (const control of controller.state.controls) {
    const wrapper = document.createElement('label');
    wrapper.className = 'control';
    const title = document.createElement('span');
    title.textContent = `${control.label} (${control.unit})`;
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.min = String(control.min);
    slider.max = String(control.max);
    slider.step = String(control.step);
    slider.value = String(control.value);
    slider.dataset.control = control.name;
    const readout = document.createElement('output');
    readout.textContent = String(control.value);
    slider.addEventListener('input', () => {
      const value = Number(slider.value);
      readout.textContent = String(value);
      controller.setControl(control.name as ControlName, value);
    });
    wrapper.append(title, slider, readout);
    root.appendChild(wrapper);
  }
}

async function boot(): Promise<void> {
  const api = new ApiClient(apiBase());
  const picker = document.getElementById('dataset-picker') as HTMLSelectElement;
  const ids = await api.listCaseStudies();
  picker.textContent = '';
  for (const id of ids) {
    const option = document.createElement('option');
    option.value = id;
    option.textContent = id;
    picker.appendChild(option);
  }

  let controller: ExplorerController | null = null;

  async function activate(id: string): Promise<void> {
    const doc = await api.getCaseStudy(id);
    controller = new ExplorerController(api, doc);
    controller.onChange = renderState;
    renderControls(controller);
    document.getElementById('dataset-title')!.textContent = controller.state.datasetName;
    await controller.refreshNow();
  }

  picker.addEventListener('change', () => void activate(picker.value));
  await activate(ids[0]);
}

if (typeof document !== 'undefined' && document.getElementById('dataset-picker')) {
  void boot();
}
