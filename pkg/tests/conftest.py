import math
from collections import Counter
from pathlib import Path

import pytest

from picolit.index import tokenize

DATA_DIR = Path(__file__).resolve().parents[1] / "data" / "mini"


@pytest.fixture(scope="session")
def mini_data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def mini_store(tmp_path_factory) -> Path:
    """Store directory populated from the bundled mini collection."""
    from picolit.concepts import AnnotationStore, lexicon_tag, load_lexicon
    from picolit.corpus import CorpusStore
    from picolit.index import InvertedIndex
    from picolit.pipeline import INDEX_FILE

    store_dir = tmp_path_factory.mktemp("mini-store")
    corpus = CorpusStore(store_dir)
    corpus.ingest_jsonl(DATA_DIR / "corpus.jsonl")
    lexicon = load_lexicon(DATA_DIR / "lexicon.tsv")
    annotations = AnnotationStore(store_dir)
    for doc in corpus:
        ann = lexicon_tag(doc, lexicon)
        if ann.spans:
            annotations.put(ann)
    annotations.persist()
    index = InvertedIndex()
    index.build(corpus)
    index.save(store_dir / INDEX_FILE)
    return store_dir


# ---------------------------------------------------------------------------
# Independent scoring oracles: recompute everything from raw document text,
# never touching the index internals.
# ---------------------------------------------------------------------------

def oracle_corpus_stats(docs):
    """docs: list of (doc_id, text). Returns (N, avgdl, df, tfs, dls)."""
    tfs = {doc_id: Counter(tokenize(text)) for doc_id, text in docs}
    dls = {doc_id: sum(tf.values()) for doc_id, tf in tfs.items()}
    df = Counter()
    for tf in tfs.values():
        for term in tf:
            df[term] += 1
    n = len(docs)
    avgdl = sum(dls.values()) / n if n else 0.0
    return n, avgdl, df, tfs, dls


def oracle_bm25(docs, query_terms, doc_id, k1=1.2, b=0.75):
    n, avgdl, df, tfs, dls = oracle_corpus_stats(docs)
    score = 0.0
    for term in query_terms:
        tf = tfs[doc_id].get(term, 0)
        if tf == 0 or df[term] == 0:
            continue
        idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
        score += idf * tf / (tf + k1 * (1 - b + b * dls[doc_id] / avgdl))
    return score


def oracle_tfidf(docs, query_terms, doc_id):
    n, _avgdl, df, tfs, dls = oracle_corpus_stats(docs)
    score = 0.0
    for term in query_terms:
        tf = tfs[doc_id].get(term, 0)
        if tf == 0 or df[term] == 0:
            continue
        idf = 1.0 + math.log(n / (df[term] + 1.0))
        score += math.sqrt(tf) * idf * idf
    return score / math.sqrt(dls[doc_id]) if dls[doc_id] else 0.0


def oracle_search(docs, query, k, scorer="bm25"):
    """Brute force: score every doc containing a query term, sort, cut."""
    query_terms = tokenize(query)
    if not query_terms:
        return []
    score_fn = oracle_bm25 if scorer == "bm25" else oracle_tfidf
    results = []
    for doc_id, text in docs:
        tokens = set(tokenize(text))
        if not tokens & set(query_terms):
            continue
        results.append((doc_id, score_fn(docs, query_terms, doc_id)))
    results.sort(key=lambda r: (-r[1], r[0]))
    return results[:k]


# ---------------------------------------------------------------------------
# Brute-force relation pairing oracle over per-document role sets.
# ---------------------------------------------------------------------------

def oracle_relations(role_sets):
    """role_sets: dict doc_id -> (p_set, i_set, o_set).

    Returns dict (kind, source, target) -> set of doc_ids.
    """
    out = {}
    for doc_id, (p, i, o) in role_sets.items():
        for a in p:
            for b in i:
                out.setdefault(("P-I", a, b), set()).add(doc_id)
        for a in i:
            for b in o:
                out.setdefault(("I-O", a, b), set()).add(doc_id)
    return out


def oracle_retained(role_sets, hit_ids):
    related = set()
    for docs in oracle_relations(role_sets).values():
        related |= docs
    return sorted(set(hit_ids) & related)


# ---------------------------------------------------------------------------
# Naive Spearman: average ranks via per-value counting, then the textbook
# Pearson formula.
# ---------------------------------------------------------------------------

def oracle_spearman(xs, ys):
    def ranks(vals):
        out = []
        for v in vals:
            smaller = sum(1 for w in vals if w < v)
            equal = sum(1 for w in vals if w == v)
            out.append(smaller + (equal + 1) / 2.0)
        return out

    rx, ry = ranks(xs), ranks(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0 or syy == 0:
        return None
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    return sxy / math.sqrt(sxx * syy)
