import type { ApiClient } from './api';
import type {
  EvalReport,
  RelationDoc,
  SankeyGraph,
  SankeyLink,
  SearchSettings,
  SearchStats,
} from './types';
import { DEFAULT_SETTINGS } from './types';

export interface LinkRef {
  source: string;
  target: string;
}

export interface ExplorerState {
  query: string;
  settings: SearchSettings;
  graph: SankeyGraph | null;
  stats: SearchStats | null;
  selectedLink: LinkRef | null;
  panelDocs: RelationDoc[];
  panelNotice: string | null;
  evalSummary: EvalReport | null;
  error: string | null;
}

export function initialState(): ExplorerState {
  return {
    query: '',
    settings: { ...DEFAULT_SETTINGS },
    graph: null,
    stats: null,
    selectedLink: null,
    panelDocs: [],
    panelNotice: null,
    evalSummary: null,
    error: null,
  };
}

/**
 * Drives the explorer: one in-flight search at a time, stale responses
 * discarded by request id. All displayed data comes from the service;
 * nothing is recomputed client-side.
 */
export class ExplorerController {
  state: ExplorerState = initialState();
  private requestId = 0;
  private listeners: Array<(s: ExplorerState) => void> = [];

  constructor(private client: ApiClient) {}

  onChange(listener: (s: ExplorerState) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async submitQuery(query: string, settings?: Partial<SearchSettings>): Promise<void> {
    const merged = { ...this.state.settings, ...settings };
    const id = ++this.requestId;
    try {
      const response = await this.client.search(query, merged);
      if (id !== this.requestId) return; // superseded
      this.state = {
        ...this.state,
        query,
        settings: merged,
        graph: response.sankey,
        stats: response.stats,
        selectedLink: null,
        panelDocs: [],
        panelNotice: null,
        error: null,
      };
    } catch (err) {
      if (id !== this.requestId) return;
      // state unchanged apart from the error banner
      this.state = { ...this.state, error: err instanceof Error ? err.message : String(err) };
    }
    this.emit();
  }

  findLink(source: string, target: string): SankeyLink | undefined {
    return this.state.graph?.links.find((l) => l.source === source && l.target === target);
  }

  async selectLink(source: string, target: string): Promise<void> {
    const link = this.findLink(source, target);
    if (!link) {
      this.state = {
        ...this.state,
        selectedLink: null,
        panelDocs: [],
        panelNotice: 'link no longer present',
      };
      this.emit();
      return;
    }
    const docs = await this.client.relationDocs(
      this.state.query,
      source,
      target,
      this.state.settings,
    );
    this.state = {
      ...this.state,
      selectedLink: { source, target },
      panelDocs: docs,
      panelNotice: null,
    };
    this.emit();
  }

  deselect(): void {
    this.state = { ...this.state, selectedLink: null, panelDocs: [], panelNotice: null };
    this.emit();
  }

  /** Re-runs the current query at a new granularity; selection is cleared. */
  async adjustGranularity(g: number): Promise<boolean> {
    if (!Number.isInteger(g) || g < 1) {
      this.state = { ...this.state, error: 'granularity must be a whole number >= 1' };
      this.emit();
      return false;
    }
    if (g === this.state.settings.granularity) return true; // no re-fetch
    await this.submitQuery(this.state.query, { granularity: g });
    return true;
  }

  async loadEvalSummary(topicsPath: string, qrelsPath: string): Promise<void> {
    try {
      const report = await this.client.evalReport(topicsPath, qrelsPath);
      this.state = { ...this.state, evalSummary: report, error: null };
    } catch (err) {
      this.state = { ...this.state, error: err instanceof Error ? err.message : String(err) };
    }
    this.emit();
  }
}
