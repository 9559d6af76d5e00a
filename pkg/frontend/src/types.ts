// JSON contract of the search service. Field names mirror the wire format.

export interface ScoredHit {
  doc_id: string;
  score: number;
  rank: number;
}

export interface SankeyNode {
  id: string;
  role: 'P' | 'I' | 'O';
  code: string;
  label: string;
}

export interface SankeyLink {
  source: string;
  target: string;
  weight: number;
  doc_ids: string[];
}

export interface SankeyGraph {
  nodes: SankeyNode[];
  links: SankeyLink[];
}

export interface SearchStats {
  n_hits: number;
  n_retained: number;
  retained_fraction: number | null;
}

export interface SearchResponse {
  query: string;
  scorer: string;
  k: number;
  granularity: number;
  scope: string;
  hits: ScoredHit[];
  retained_doc_ids: string[];
  sankey: SankeyGraph;
  stats: SearchStats;
}

export type Judgment = 'relevant' | 'irrelevant' | 'unjudged';

export interface RelationDoc {
  doc_id: string;
  title: string;
  judgment?: Judgment;
}

export interface SummaryStats {
  mean: number;
  min: number;
  max: number;
  median: number;
  n: number;
}

export interface EvalReport {
  raw: Record<string, string>[];
  filtered: Record<string, string>[];
  precision_delta: Record<string, number | null>;
  summary: Record<string, Record<string, SummaryStats | null>>;
  retained_fraction?: Record<string, number | null>;
}

export interface SearchSettings {
  k: number;
  scorer: 'bm25' | 'tfidf';
  granularity: number;
  scope: 'title+abstract' | 'abstract';
}

export const DEFAULT_SETTINGS: SearchSettings = {
  k: 1000,
  scorer: 'bm25',
  granularity: 1,
  scope: 'title+abstract',
};
