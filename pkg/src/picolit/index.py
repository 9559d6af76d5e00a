"""Inverted index over title+abstract with BM25 and classic tf-idf scoring."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import Document

K1 = 1.2
B = 0.75
MAX_HITS = 1000

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Small English stopword list, disabled by default.
STOPWORDS = frozenset(
    "a an and are as at be but by for from has have in is it its of on or "
    "that the to was were what which with will how does do can".split()
)


def tokenize(text: str, remove_stopwords: bool = False) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    tokens = _TOKEN_RE.findall(text.lower())
    if remove_stopwords:
        tokens = [t for t in tokens if t not in STOPWORDS]
    return tokens


@dataclass(frozen=True)
class ScoredHit:
    doc_id: str
    score: float
    rank: int


class InvertedIndex:
    """Immutable after build; search is a pure function of (index, query)."""

    def __init__(self, remove_stopwords: bool = False):
        self.remove_stopwords = remove_stopwords
        self.n_docs = 0
        self.avg_doc_len = 0.0
        self.doc_len: dict[str, int] = {}
        # term -> list of (doc_id, tf), sorted by doc_id
        self.postings: dict[str, list[tuple[str, int]]] = {}

    def build(self, docs: Iterable[Document]) -> None:
        for doc in docs:
            tokens = tokenize(doc.combined_field(), self.remove_stopwords)
            self.doc_len[doc.doc_id] = len(tokens)
            tf: dict[str, int] = {}
            for tok in tokens:
                tf[tok] = tf.get(tok, 0) + 1
            for term, count in tf.items():
                self.postings.setdefault(term, []).append((doc.doc_id, count))
        for plist in self.postings.values():
            plist.sort(key=lambda p: p[0])
        self.n_docs = len(self.doc_len)
        total = sum(self.doc_len.values())
        self.avg_doc_len = total / self.n_docs if self.n_docs else 0.0

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def term_frequency(self, term: str, doc_id: str) -> int:
        for d, tf in self.postings.get(term, ()):
            if d == doc_id:
                return tf
        return 0

    def score_bm25(self, query_terms: list[str], doc_id: str) -> float:
        """Okapi BM25 with k1=1.2, b=0.75; unseen terms contribute 0."""
        dl = self.doc_len.get(doc_id, 0)
        if not dl or not self.n_docs:
            return 0.0
        norm = K1 * (1 - B + B * dl / self.avg_doc_len)
        score = 0.0
        for term in query_terms:
            df = self.df(term)
            if df == 0:
                continue
            tf = self.term_frequency(term, doc_id)
            if tf == 0:
                continue
            idf = math.log(1.0 + (self.n_docs - df + 0.5) / (df + 0.5))
            score += idf * tf / (tf + norm)
        return score

    def score_classic_tfidf(self, query_terms: list[str], doc_id: str) -> float:
        """Classic practical tf-idf: sqrt(tf) * idf^2 * 1/sqrt(dl) per term."""
        dl = self.doc_len.get(doc_id, 0)
        if not dl or not self.n_docs:
            return 0.0
        score = 0.0
        for term in query_terms:
            df = self.df(term)
            if df == 0:
                continue
            tf = self.term_frequency(term, doc_id)
            if tf == 0:
                continue
            idf = 1.0 + math.log(self.n_docs / (df + 1.0))
            score += math.sqrt(tf) * idf * idf
        return score / math.sqrt(dl)

    def search(self, query: str, k: int = MAX_HITS, scorer: str = "bm25") -> list[ScoredHit]:
        """Top-k hits over documents containing at least one query term.

        Ordering: score descending, ties broken by doc_id ascending.
        """
        if scorer not in ("bm25", "tfidf"):
            raise ValueError(f"unknown scorer {scorer!r}")
        query_terms = tokenize(query, self.remove_stopwords)
        if not query_terms:
            return []
        candidates: set[str] = set()
        for term in set(query_terms):
            candidates.update(d for d, _ in self.postings.get(term, ()))
        score_fn = self.score_bm25 if scorer == "bm25" else self.score_classic_tfidf
        scored = sorted(
            ((doc_id, score_fn(query_terms, doc_id)) for doc_id in candidates),
            key=lambda pair: (-pair[1], pair[0]),
        )
        return [ScoredHit(doc_id, score, rank)
                for rank, (doc_id, score) in enumerate(scored[:k], 1)]

    def save(self, path: str | Path) -> None:
        payload = {
            "remove_stopwords": self.remove_stopwords,
            "doc_len": self.doc_len,
            "postings": {t: [[d, tf] for d, tf in p] for t, p in self.postings.items()},
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "InvertedIndex":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        idx = cls(remove_stopwords=payload["remove_stopwords"])
        idx.doc_len = {d: int(n) for d, n in payload["doc_len"].items()}
        idx.postings = {t: [(d, int(tf)) for d, tf in p]
                        for t, p in payload["postings"].items()}
        idx.n_docs = len(idx.doc_len)
        total = sum(idx.doc_len.values())
        idx.avg_doc_len = total / idx.n_docs if idx.n_docs else 0.0
        return idx
