"""Shared search/eval pipeline used by both the CLI and the HTTP service."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .concepts import AnnotationStore
from .corpus import CorpusStore
from .evaluation import (Qrels, Topic, ViewComparison, compare_views,
                         comparison_to_dict, evaluate_query, parse_qrels,
                         parse_topics)
from .index import MAX_HITS, InvertedIndex
from .relations import (SCOPE_FULL, LinkNotFound, build_relations, filter_hits,
                        relation_documents, to_sankey)

INDEX_FILE = "index.json"


class StoreNotLoaded(RuntimeError):
    """The store directory lacks a required artifact (docs or index)."""


@dataclass
class SearchParams:
    k: int = MAX_HITS
    scorer: str = "bm25"
    granularity: int = 1
    scope: str = SCOPE_FULL

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.granularity < 1:
            raise ValueError("granularity must be >= 1")


class Workspace:
    """A loaded store: corpus + annotations + index, optionally topics/qrels."""

    def __init__(self, store_dir: str | Path,
                 topics_path: str | Path | None = None,
                 qrels_path: str | Path | None = None):
        self.store_dir = Path(store_dir)
        self.corpus = CorpusStore(self.store_dir)
        if len(self.corpus) == 0:
            raise StoreNotLoaded(f"no documents in store {self.store_dir}")
        self.annotations = AnnotationStore(self.store_dir)
        index_path = self.store_dir / INDEX_FILE
        if index_path.exists():
            self.index = InvertedIndex.load(index_path)
        else:
            self.index = InvertedIndex()
            self.index.build(self.corpus)
        self.topics: list[Topic] = parse_topics(topics_path) if topics_path else []
        self.qrels: Qrels | None = parse_qrels(qrels_path) if qrels_path else None

    def _search_parts(self, q: str, params: SearchParams):
        params.validate()
        hits = self.index.search(q, k=params.k, scorer=params.scorer)
        relations = build_relations([h.doc_id for h in hits], self.annotations,
                                    self.corpus, params.granularity, params.scope)
        retained = filter_hits(hits, relations)
        return hits, relations, retained

    def search_response(self, q: str, params: SearchParams) -> dict:
        hits, relations, retained = self._search_parts(q, params)
        n_hits = len(hits)
        return {
            "query": q,
            "scorer": params.scorer,
            "k": params.k,
            "granularity": params.granularity,
            "scope": params.scope,
            "hits": [{"doc_id": h.doc_id, "score": h.score, "rank": h.rank}
                     for h in hits],
            "retained_doc_ids": retained,
            "sankey": to_sankey(relations).to_dict(),
            "stats": {
                "n_hits": n_hits,
                "n_retained": len(retained),
                "retained_fraction": len(retained) / n_hits if n_hits else None,
            },
        }

    def _topic_for_query(self, q: str) -> Topic | None:
        for topic in self.topics:
            if topic.question == q:
                return topic
        return None

    def relation_docs(self, q: str, source: str, target: str,
                      params: SearchParams, offset: int = 0,
                      limit: int = 100) -> list[dict]:
        """Documents behind one Sankey link, with titles and optional judgments.

        Raises LinkNotFound if the link does not exist for this query/params.
        """
        _hits, relations, _retained = self._search_parts(q, params)
        graph = to_sankey(relations)
        doc_ids = relation_documents(graph, source, target)
        topic = self._topic_for_query(q) if self.qrels else None
        rows = []
        for doc_id in doc_ids[offset:offset + limit]:
            doc = self.corpus.get(doc_id)
            row = {"doc_id": doc_id, "title": doc.title if doc else ""}
            if topic is not None:
                rel = self.qrels.is_relevant(topic.topic_id, doc_id)
                row["judgment"] = ("unjudged" if rel is None
                                   else "relevant" if rel else "irrelevant")
            rows.append(row)
        return rows

    def eval_run(self, topics: list[Topic], qrels: Qrels,
                 params: SearchParams) -> tuple[ViewComparison, dict[str, float | None]]:
        """Raw vs relation-filtered evaluation over all topics."""
        if not topics:
            raise ValueError("empty topic list")
        raw, filtered, fractions = {}, {}, {}
        for topic in topics:
            hits, _relations, retained = self._search_parts(topic.question, params)
            hit_ids = [h.doc_id for h in hits]
            raw[topic.topic_id] = evaluate_query(hit_ids, topic.topic_id, qrels)
            filtered[topic.topic_id] = evaluate_query(retained, topic.topic_id, qrels)
            fractions[topic.topic_id] = len(retained) / len(hits) if hits else None
        return compare_views(raw, filtered), fractions


def eval_report_dict(comparison: ViewComparison,
                     fractions: dict[str, float | None]) -> dict:
    report = comparison_to_dict(comparison)
    report["retained_fraction"] = {t: fractions[t] for t in sorted(fractions)}
    return report


def search_response_json(response: dict) -> str:
    """Canonical JSON rendering so repeated requests are byte-identical."""
    return json.dumps(response, sort_keys=True, separators=(",", ":"))
