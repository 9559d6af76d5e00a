import type { SankeyGraph } from './types';

const LABEL_BUDGET = 28;
const MIN_LINK_WIDTH = 2;
const MAX_LINK_WIDTH = 40;
const NODE_WIDTH = 14;
const NODE_GAP = 12;

export interface NodePosition {
  id: string;
  role: 'P' | 'I' | 'O';
  label: string;
  x: number;
  y: number;
  height: number;
}

export interface LinkPath {
  source: string;
  target: string;
  weight: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  strokeWidth: number;
}

export interface Layout {
  width: number;
  height: number;
  nodeWidth: number;
  nodes: NodePosition[];
  links: LinkPath[];
}

export function ellipsize(label: string, budget: number = LABEL_BUDGET): string {
  if (label.length <= budget) return label;
  return label.slice(0, budget - 1) + '…';
}

/** Total document weight flowing through a node (max of in/out). */
function nodeWeight(graph: SankeyGraph, nodeId: string): number {
  let inbound = 0;
  let outbound = 0;
  for (const link of graph.links) {
    if (link.target === nodeId) inbound += link.weight;
    if (link.source === nodeId) outbound += link.weight;
  }
  return Math.max(inbound, outbound, 1);
}

/**
 * Three fixed columns (P, I, O), node heights and link widths proportional
 * to document counts received from the service.
 */
export function computeLayout(graph: SankeyGraph, width = 760, height = 420): Layout {
  const columns: Record<'P' | 'I' | 'O', string[]> = { P: [], I: [], O: [] };
  for (const node of graph.nodes) columns[node.role].push(node.id);

  const columnX: Record<'P' | 'I' | 'O', number> = {
    P: 0,
    I: (width - NODE_WIDTH) / 2,
    O: width - NODE_WIDTH,
  };

  const maxWeight = Math.max(1, ...graph.links.map((l) => l.weight));
  const unit = Math.min(24, (height * 0.6) / maxWeight);

  const nodes: NodePosition[] = [];
  const positions = new Map<string, NodePosition>();
  for (const role of ['P', 'I', 'O'] as const) {
    let y = 0;
    for (const id of columns[role]) {
      const node = graph.nodes.find((n) => n.id === id)!;
      const h = Math.max(NODE_GAP, nodeWeight(graph, id) * unit);
      const pos: NodePosition = {
        id,
        role,
        label: ellipsize(node.label),
        x: columnX[role],
        y,
        height: h,
      };
      nodes.push(pos);
      positions.set(id, pos);
      y += h + NODE_GAP;
    }
  }

  const links: LinkPath[] = graph.links.map((link) => {
    const src = positions.get(link.source)!;
    const tgt = positions.get(link.target)!;
    const scaled = (link.weight / maxWeight) * MAX_LINK_WIDTH;
    return {
      source: link.source,
      target: link.target,
      weight: link.weight,
      x1: src.x + NODE_WIDTH,
      y1: src.y + src.height / 2,
      x2: tgt.x,
      y2: tgt.y + tgt.height / 2,
      strokeWidth: Math.max(MIN_LINK_WIDTH, scaled),
    };
  });

  return { width, height, nodeWidth: NODE_WIDTH, nodes, links };
}
