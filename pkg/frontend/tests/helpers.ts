import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import type { ApiClient } from '../src/api';
import type { EvalReport, RelationDoc, SearchResponse, SearchSettings } from '../src/types';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');

export const QUESTIONS: Record<string, string> = {
  '1': 'does hydroxychloroquine reduce diabetes mortality',
  '2': 'remdesivir effective against pneumonia',
  '3': 'can dexamethasone prevent inflammation',
};

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), 'utf-8')) as T;
}

function topicForQuery(q: string): string {
  const entry = Object.entries(QUESTIONS).find(([, question]) => question === q);
  if (!entry) throw new Error(`no fixture for query: ${q}`);
  return entry[0];
}

/** Serves recorded service responses; counts calls for re-fetch assertions. */
export class FixtureClient implements ApiClient {
  searchCalls = 0;
  relationDocsCalls = 0;

  async search(q: string, settings: SearchSettings): Promise<SearchResponse> {
    this.searchCalls += 1;
    const topic = topicForQuery(q);
    return loadFixture<SearchResponse>(`search_t${topic}_g${settings.granularity}.json`);
  }

  async relationDocs(
    q: string,
    source: string,
    target: string,
    settings: SearchSettings,
  ): Promise<RelationDoc[]> {
    this.relationDocsCalls += 1;
    const topic = topicForQuery(q);
    const drill = loadFixture<Record<string, RelationDoc[]>>(
      `relation_docs_t${topic}_g${settings.granularity}.json`,
    );
    const docs = drill[`${source}|${target}`];
    if (!docs) throw new Error(`no link ${source} -> ${target}`);
    return docs;
  }

  async evalReport(): Promise<EvalReport> {
    return loadFixture<EvalReport>('eval.json');
  }
}
