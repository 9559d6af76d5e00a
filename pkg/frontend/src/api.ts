import type { RelationDoc, SearchResponse, SearchSettings, EvalReport } from './types';

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

/** What the explorer needs from the backend; swappable in tests. */
export interface ApiClient {
  search(q: string, settings: SearchSettings): Promise<SearchResponse>;
  relationDocs(
    q: string,
    source: string,
    target: string,
    settings: SearchSettings,
  ): Promise<RelationDoc[]>;
  evalReport(topicsPath: string, qrelsPath: string): Promise<EvalReport>;
}

function settingsParams(settings: SearchSettings): Record<string, string> {
  return {
    k: String(settings.k),
    scorer: settings.scorer,
    granularity: String(settings.granularity),
    scope: settings.scope,
  };
}

export class HttpApiClient implements ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const resp = await this.fetchFn(`${this.baseUrl}${path}?${qs}`);
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({ code: 'unknown', message: resp.statusText }));
      throw new ApiError(resp.status, body.code ?? 'unknown', body.message ?? resp.statusText);
    }
    return resp.json() as Promise<T>;
  }

  search(q: string, settings: SearchSettings): Promise<SearchResponse> {
    return this.get('/search', { q, ...settingsParams(settings) });
  }

  relationDocs(
    q: string,
    source: string,
    target: string,
    settings: SearchSettings,
  ): Promise<RelationDoc[]> {
    return this.get('/relation-docs', { q, source, target, ...settingsParams(settings) });
  }

  async evalReport(topicsPath: string, qrelsPath: string): Promise<EvalReport> {
    const resp = await this.fetchFn(`${this.baseUrl}/eval`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ topics_path: topicsPath, qrels_path: qrelsPath }),
    });
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({ code: 'unknown', message: resp.statusText }));
      throw new ApiError(resp.status, body.code ?? 'unknown', body.message ?? resp.statusText);
    }
    return resp.json() as Promise<EvalReport>;
  }
}
