import { computeLayout } from './layout';
import type { ExplorerController, ExplorerState } from './state';
import type { Judgment } from './types';

const SVG_NS = 'http://www.w3.org/2000/svg';

const BADGE_CLASS: Record<Judgment, string> = {
  relevant: 'badge badge-relevant',
  irrelevant: 'badge badge-irrelevant',
  unjudged: 'badge badge-unjudged',
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderBanner(state: ExplorerState, container: HTMLElement): void {
  const banner = el('div', 'stats-banner');
  if (state.error) {
    banner.classList.add('error');
    banner.textContent = state.error;
  } else if (state.stats) {
    const { n_hits, n_retained, retained_fraction } = state.stats;
    const frac = retained_fraction === null ? 'n/a' : `${(retained_fraction * 100).toFixed(1)}%`;
    banner.textContent = `${n_hits} hits, ${n_retained} with relations (${frac})`;
  }
  container.appendChild(banner);
}

function renderSankey(
  state: ExplorerState,
  controller: ExplorerController,
  container: HTMLElement,
): void {
  const graph = state.graph;
  if (!graph || graph.links.length === 0) {
    container.appendChild(el('div', 'empty-state', 'no relations found'));
    return;
  }
  const layout = computeLayout(graph);
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('width', String(layout.width));
  svg.setAttribute('height', String(layout.height));

  for (const link of layout.links) {
    const line = document.createElementNS(SVG_NS, 'line');
    line.setAttribute('x1', String(link.x1));
    line.setAttribute('y1', String(link.y1));
    line.setAttribute('x2', String(link.x2));
    line.setAttribute('y2', String(link.y2));
    line.setAttribute('stroke-width', String(link.strokeWidth));
    line.setAttribute('class', 'sankey-link');
    line.addEventListener('click', () => {
      void controller.selectLink(link.source, link.target);
    });
    svg.appendChild(line);
  }

  for (const node of layout.nodes) {
    const rect = document.createElementNS(SVG_NS, 'rect');
    rect.setAttribute('x', String(node.x));
    rect.setAttribute('y', String(node.y));
    rect.setAttribute('width', String(layout.nodeWidth));
    rect.setAttribute('height', String(node.height));
    rect.setAttribute('class', `sankey-node role-${node.role}`);
    svg.appendChild(rect);

    const text = document.createElementNS(SVG_NS, 'text');
    text.setAttribute('x', String(node.role === 'O' ? node.x - 4 : node.x + layout.nodeWidth + 4));
    text.setAttribute('y', String(node.y + node.height / 2 + 4));
    if (node.role === 'O') text.setAttribute('text-anchor', 'end');
    text.textContent = node.label;
    svg.appendChild(text);
  }
  container.appendChild(svg);
}

function renderPanel(state: ExplorerState, container: HTMLElement): void {
  const panel = el('div', 'doc-panel');
  if (state.panelNotice) {
    panel.appendChild(el('div', 'panel-notice', state.panelNotice));
  }
  if (state.selectedLink && state.panelDocs.length > 0) {
    panel.appendChild(
      el('h3', undefined, `${state.panelDocs.length} document(s) for this relation`),
    );
    const list = el('ul', 'doc-list');
    for (const doc of state.panelDocs) {
      const item = el('li', 'doc-item');
      item.appendChild(el('span', 'doc-title', doc.title));
      if (doc.judgment) {
        item.appendChild(el('span', BADGE_CLASS[doc.judgment], doc.judgment));
      }
      list.appendChild(item);
    }
    panel.appendChild(list);
  }
  container.appendChild(panel);
}

function renderEvalSummary(state: ExplorerState, container: HTMLElement): void {
  if (!state.evalSummary) return;
  const section = el('div', 'eval-summary');
  section.appendChild(el('h3', undefined, 'Raw vs filtered precision'));
  const table = el('table');
  const head = el('tr');
  for (const heading of ['view', 'median', 'mean', 'min', 'max', 'n']) {
    head.appendChild(el('th', undefined, heading));
  }
  table.appendChild(head);
  for (const view of ['raw', 'filtered']) {
    const stats = state.evalSummary.summary[view]?.precision;
    if (!stats) continue;
    const row = el('tr');
    row.appendChild(el('td', undefined, view));
    for (const value of [stats.median, stats.mean, stats.min, stats.max]) {
      row.appendChild(el('td', undefined, value.toFixed(4)));
    }
    row.appendChild(el('td', undefined, String(stats.n)));
    table.appendChild(row);
  }
  section.appendChild(table);
  container.appendChild(section);
}

export function render(
  state: ExplorerState,
  controller: ExplorerController,
  container: HTMLElement,
): void {
  container.replaceChildren();
  renderBanner(state, container);
  renderSankey(state, controller, container);
  renderPanel(state, container);
  renderEvalSummary(state, container);
}
