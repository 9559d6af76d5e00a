#!/usr/bin/env python3
"""Capture HTTP responses from the service into frontend test fixtures.

Builds a store from the bundled mini collection, stands up the service, and
records /search (granularity 1 and 2), /relation-docs for every link, and
/eval bodies as JSON files under frontend/tests/fixtures/.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from picolit.concepts import AnnotationStore, lexicon_tag, load_lexicon
from picolit.corpus import CorpusStore
from picolit.service import create_app

DATA = ROOT / "data" / "mini"
OUT = ROOT / "frontend" / "tests" / "fixtures"

QUESTIONS = {
    "1": "does hydroxychloroquine reduce diabetes mortality",
    "2": "remdesivir effective against pneumonia",
    "3": "can dexamethasone prevent inflammation",
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix="picolit-frontend-") as tmp:
        corpus = CorpusStore(tmp)
        corpus.ingest_jsonl(DATA / "corpus.jsonl")
        lexicon = load_lexicon(DATA / "lexicon.tsv")
        annotations = AnnotationStore(tmp)
        for doc in corpus:
            ann = lexicon_tag(doc, lexicon)
            if ann.spans:
                annotations.put(ann)
        annotations.persist()

        client = TestClient(create_app(tmp, topics_path=DATA / "topics.xml",
                                       qrels_path=DATA / "qrels.txt"))

        for topic_id, question in QUESTIONS.items():
            for g in (1, 2):
                resp = client.get("/search", params={"q": question, "granularity": g})
                resp.raise_for_status()
                body = resp.json()
                (OUT / f"search_t{topic_id}_g{g}.json").write_text(
                    json.dumps(body, indent=2, sort_keys=True) + "\n")
                drill = {}
                for link in body["sankey"]["links"]:
                    r = client.get("/relation-docs", params={
                        "q": question, "source": link["source"],
                        "target": link["target"], "granularity": g})
                    r.raise_for_status()
                    drill[f"{link['source']}|{link['target']}"] = r.json()
                (OUT / f"relation_docs_t{topic_id}_g{g}.json").write_text(
                    json.dumps(drill, indent=2, sort_keys=True) + "\n")

        resp = client.post("/eval", json={"topics_path": str(DATA / "topics.xml"),
                                          "qrels_path": str(DATA / "qrels.txt")})
        resp.raise_for_status()
        (OUT / "eval.json").write_text(
            json.dumps(resp.json(), indent=2, sort_keys=True) + "\n")

    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
