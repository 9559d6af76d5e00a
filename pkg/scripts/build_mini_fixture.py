#!/usr/bin/env python3
"""Generate the bundled mini test collection under data/mini/.

The fixture is designed so that, per topic, retrieval returns exactly that
topic's 16-document group, three of those documents carry a P-I (and
sometimes I-O) relation, and the relation-filtered view has higher median
precision than the raw view. The script rebuilds the whole pipeline and
asserts those properties before writing anything is considered final.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from picolit.concepts import AnnotationStore, lexicon_tag, load_lexicon
from picolit.corpus import CorpusStore
from picolit.evaluation import evaluate_query, parse_qrels, parse_topics
from picolit.index import tokenize
from picolit.pipeline import SearchParams, Workspace

OUT = Path(__file__).resolve().parents[1] / "data" / "mini"

# Words reserved for topic questions; no document may contain them unless
# it belongs to that topic's group.
QUESTION_ONLY = {"does", "reduce", "effective", "against", "can", "prevent"}

FILLERS = [
    "We analysed a randomized clinical cohort of covid cases.",
    "Laboratory findings were recorded across several hospital sites.",
    "The observational data covered three months of admissions.",
    "Follow up visits continued after discharge from the ward.",
    "Samples were processed under a standardized protocol.",
    "The registry included adults enrolled during the first wave.",
    "Statistical models adjusted for age and comorbidity burden.",
    "Secondary endpoints were assessed at day twenty eight.",
]

GROUPS = {
    "1": {
        "prefix": "hcq",
        "drug": "hydroxychloroquine",
        "question": "does hydroxychloroquine reduce diabetes mortality",
        "query": "hydroxychloroquine diabetes",
        "narrative": "Studies of hydroxychloroquine and diabetic covid cohorts.",
        "p_phrase": "diabetes",
        "o_phrase": "mortality",
    },
    "2": {
        "prefix": "rdv",
        "drug": "remdesivir",
        "question": "remdesivir effective against pneumonia",
        "query": "remdesivir pneumonia",
        "narrative": "Trials of remdesivir for covid pneumonia cohorts.",
        "p_phrase": "pneumonia",
        "o_phrase": "recovery",
    },
    "3": {
        "prefix": "dex",
        "drug": "dexamethasone",
        "question": "can dexamethasone prevent inflammation",
        "query": "dexamethasone inflammation",
        "narrative": "Steroid therapy and inflammatory covid outcomes.",
        "p_phrase": "hypertension",
        "o_phrase": "inflammation",
    },
}

LEXICON_TSV = """\
diabetes\tC18.452.394.750\tP
pneumonia\tC08.381.677\tP
hypertension\tC14.907.489\tP
hydroxychloroquine\tD03.633.100.810.050.180.350\tI
remdesivir\tD03.633.100.759\tI
dexamethasone\tD04.210.500.745.432\tI
mortality\tC23.550.260\tO
recovery\tC23.550.760\tO
inflammation\tC23.550.470\tO
"""

# topic -> doc suffix -> judgment
QRELS_PLAN = {
    "1": {"01": 2, "02": 2, "03": 1, "04": 2,
          "05": 0, "06": 0, "07": 0, "08": 0},
    "2": {"01": 2, "04": 1, "02": 0, "05": 0, "06": 0, "07": 0},
    "3": {"01": 2, "02": 2, "04": 1, "03": 0, "05": 0, "06": 0},
}


def build_docs() -> list[dict]:
    docs = []
    for topic_id, g in GROUPS.items():
        drug = g["drug"]
        for n in range(1, 17):
            doc_id = f"{g['prefix']}{n:02d}"
            title = f"{drug.capitalize()} cohort study {n}"
            sentences = [f"A clinical report on {drug} therapy."]
            if n <= 3:
                sentences.append(
                    f"Participants with {g['p_phrase']} received {drug} daily.")
            if n == 3:
                sentences.append(
                    f"The trial measured {g['o_phrase']} at thirty days.")
            sentences.append(FILLERS[(n - 1) % len(FILLERS)])
            sentences.append(FILLERS[(n + 2) % len(FILLERS)])
            docs.append({"doc_id": doc_id, "title": title,
                         "abstract": " ".join(sentences)})
    docs.append({"doc_id": "zzz01", "title": "Genome sequencing survey",
                 "abstract": "Phylogenetic analysis of viral lineages across regions."})
    docs.append({"doc_id": "zzz02", "title": "Mask usage modelling report",
                 "abstract": "Simulation of droplet transmission within indoor spaces."})
    return docs


def check_vocabulary(docs: list[dict]) -> None:
    group_tokens = {tid: set(tokenize(" ".join([g["question"], g["drug"],
                                                g["p_phrase"], g["o_phrase"]])))
                    for tid, g in GROUPS.items()}
    for doc in docs:
        tokens = set(tokenize(doc["title"] + " " + doc["abstract"]))
        owner = next((tid for tid, g in GROUPS.items()
                      if doc["doc_id"].startswith(g["prefix"])), None)
        assert not tokens & QUESTION_ONLY, (doc["doc_id"], tokens & QUESTION_ONLY)
        for tid, qtoks in group_tokens.items():
            if tid != owner:
                overlap = tokens & (qtoks - {"covid"})
                assert not overlap, (doc["doc_id"], tid, overlap)


def write_fixture() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    docs = build_docs()
    check_vocabulary(docs)

    with (OUT / "corpus.jsonl").open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc) + "\n")

    (OUT / "lexicon.tsv").write_text(LEXICON_TSV, encoding="utf-8")

    topic_xml = ["<topics>"]
    for tid, g in GROUPS.items():
        topic_xml.append(
            f'  <topic number="{tid}">\n'
            f"    <query>{g['query']}</query>\n"
            f"    <question>{g['question']}</question>\n"
            f"    <narrative>{g['narrative']}</narrative>\n"
            f"  </topic>")
    topic_xml.append("</topics>\n")
    (OUT / "topics.xml").write_text("\n".join(topic_xml), encoding="utf-8")

    qrels_lines = []
    for tid in sorted(QRELS_PLAN):
        prefix = GROUPS[tid]["prefix"]
        for suffix, judgment in sorted(QRELS_PLAN[tid].items()):
            qrels_lines.append(f"{tid} 0 {prefix}{suffix} {judgment}")
    (OUT / "qrels.txt").write_text("\n".join(qrels_lines) + "\n", encoding="utf-8")

    query_ann = {
        "1": {"P": ["C18"], "I": ["D03"], "O": ["C23"]},
        "2": {"P": ["C08"], "I": ["D03"], "O": ["C23"]},
        "3": {"P": ["C14"], "I": ["D04"], "O": ["C23"]},
    }
    (OUT / "query_annotations.json").write_text(
        json.dumps(query_ann, indent=2) + "\n", encoding="utf-8")


def verify() -> None:
    tmp = Path(tempfile.mkdtemp(prefix="picolit-fixture-"))
    try:
        corpus = CorpusStore(tmp)
        stats = corpus.ingest_jsonl(OUT / "corpus.jsonl")
        assert stats.n_docs == 50 and not stats.rejected, stats

        lexicon = load_lexicon(OUT / "lexicon.tsv")
        annotations = AnnotationStore(tmp)
        for doc in corpus:
            ann = lexicon_tag(doc, lexicon)
            if ann.spans:
                annotations.put(ann)
        annotations.persist()

        ws = Workspace(tmp)
        topics = parse_topics(OUT / "topics.xml")
        qrels = parse_qrels(OUT / "qrels.txt")
        params = SearchParams()

        raw_p, filt_p = [], []
        for topic in topics:
            g = GROUPS[topic.topic_id]
            response = ws.search_response(topic.question, params)
            hit_ids = {h["doc_id"] for h in response["hits"]}
            expected = {f"{g['prefix']}{n:02d}" for n in range(1, 17)}
            assert hit_ids == expected, (topic.topic_id, hit_ids ^ expected)
            retained = response["retained_doc_ids"]
            assert set(retained) == {f"{g['prefix']}0{n}" for n in (1, 2, 3)}
            frac = response["stats"]["retained_fraction"]
            assert 0.08 <= frac <= 0.28, frac
            raw_p.append(evaluate_query(sorted(hit_ids), topic.topic_id, qrels).precision)
            filt_p.append(evaluate_query(retained, topic.topic_id, qrels).precision)

        raw_median = sorted(raw_p)[1]
        filt_median = sorted(filt_p)[1]
        assert filt_median > raw_median, (raw_median, filt_median)
        print(f"fixture ok: raw median {raw_median:.4f}, "
              f"filtered median {filt_median:.4f}")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


if __name__ == "__main__":
    write_fixture()
    verify()
