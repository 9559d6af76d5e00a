import { describe, expect, it } from 'vitest';
import { computeLayout, ellipsize } from '../src/layout';
import type { SankeyGraph, SearchResponse } from '../src/types';
import { loadFixture } from './helpers';

const graph: SankeyGraph = loadFixture<SearchResponse>('search_t1_g1.json').sankey;

describe('computeLayout', () => {
  it('places roles in three columns ordered P, I, O', () => {
    const layout = computeLayout(graph);
    const xs = new Map(layout.nodes.map((n) => [n.role, n.x]));
    expect(xs.get('P')!).toBeLessThan(xs.get('I')!);
    expect(xs.get('I')!).toBeLessThan(xs.get('O')!);
  });

  it('renders heavier links wider', () => {
    const layout = computeLayout(graph);
    const widths = layout.links
      .slice()
      .sort((a, b) => a.weight - b.weight)
      .map((l) => l.strokeWidth);
    for (let i = 1; i < widths.length; i++) {
      expect(widths[i]).toBeGreaterThanOrEqual(widths[i - 1]);
    }
    const heavy = layout.links.find((l) => l.weight === 3);
    const light = layout.links.find((l) => l.weight === 1);
    expect(heavy && light && heavy.strokeWidth > light.strokeWidth).toBe(true);
  });

  it('keeps a link for every graph link', () => {
    const layout = computeLayout(graph);
    expect(layout.links.map((l) => `${l.source}|${l.target}`).sort()).toEqual(
      graph.links.map((l) => `${l.source}|${l.target}`).sort(),
    );
  });

  it('handles an empty graph', () => {
    const layout = computeLayout({ nodes: [], links: [] });
    expect(layout.nodes).toEqual([]);
    expect(layout.links).toEqual([]);
  });
});

describe('ellipsize', () => {
  it('keeps short labels intact', () => {
    expect(ellipsize('Geographic Locations')).toBe('Geographic Locations');
  });

  it('cuts long labels at the budget', () => {
    const long = 'Hormones, Hormone Substitutes, and Hormone Antagonists';
    const out = ellipsize(long, 20);
    expect(out.length).toBe(20);
    expect(out.endsWith('…')).toBe(true);
  });
});
