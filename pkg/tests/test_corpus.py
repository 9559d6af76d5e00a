import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picolit.corpus import CorpusError, CorpusStore


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def test_empty_file(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text("")
    stats = CorpusStore(tmp_path / "store").ingest_jsonl(path)
    assert stats.n_docs == 0
    assert stats.rejected == []


def test_three_distinct_docs(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [{"doc_id": f"d{i}", "title": f"t{i}", "abstract": "a"}
                       for i in range(3)])
    stats = CorpusStore(tmp_path / "store").ingest_jsonl(path)
    assert stats.n_docs == 3


def test_duplicate_rejected_with_line_number(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [
        {"doc_id": "d1", "title": "t1", "abstract": "a"},
        {"doc_id": "d2", "title": "t2", "abstract": "a"},
        {"doc_id": "d1", "title": "t3", "abstract": "a"},
        {"doc_id": "d3", "title": "t4", "abstract": "a"},
    ])
    store = CorpusStore(tmp_path / "store")
    stats = store.ingest_jsonl(path)
    assert stats.n_docs == 3
    assert stats.rejected == [(3, "duplicate")]
    # first occurrence wins
    assert store.get("d1").title == "t1"


def test_empty_title_rejected(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [{"doc_id": "d1", "title": "", "abstract": "a"}])
    stats = CorpusStore(tmp_path / "store").ingest_jsonl(path)
    assert stats.n_docs == 0
    assert stats.rejected == [(1, "empty title")]


def test_empty_abstract_legal(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [{"doc_id": "d1", "title": "t", "abstract": ""}])
    stats = CorpusStore(tmp_path / "store").ingest_jsonl(path)
    assert stats.n_docs == 1
    assert stats.n_empty_abstract == 1


def test_get_roundtrip(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [
        {"doc_id": "x", "title": "Tïtle", "abstract": "àbstract text"},
        {"doc_id": "y", "title": "Other", "abstract": ""},
    ])
    store = CorpusStore(tmp_path / "store")
    store.ingest_jsonl(path)
    doc = store.get("x")
    assert doc.title == "Tïtle"
    assert doc.abstract == "àbstract text"
    assert store.get("y").title == "Other"
    assert store.get("unknown") is None
    # pure lookup
    assert store.get("x") == store.get("x")


def test_survives_restart(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, [{"doc_id": "d1", "title": "t", "abstract": "a"}])
    CorpusStore(tmp_path / "store").ingest_jsonl(path)
    reopened = CorpusStore(tmp_path / "store")
    assert reopened.get("d1").abstract == "a"


def test_unreadable_file_fatal(tmp_path):
    with pytest.raises(CorpusError):
        CorpusStore(tmp_path / "store").ingest_jsonl(tmp_path / "missing.jsonl")


def test_csv_header_only(tmp_path):
    path = tmp_path / "meta.csv"
    path.write_text("cord_uid,title,abstract\n")
    stats = CorpusStore(tmp_path / "store").ingest_csv(path)
    assert stats.n_docs == 0


def test_csv_default_cord19_mapping(tmp_path):
    path = tmp_path / "meta.csv"
    path.write_text("cord_uid,title,abstract\nu1,T one,A one\nu2,T two,A two\n")
    store = CorpusStore(tmp_path / "store")
    stats = store.ingest_csv(path)
    assert stats.n_docs == 2
    assert store.get("u1").title == "T one"


def test_csv_missing_column_fatal(tmp_path):
    path = tmp_path / "meta.csv"
    path.write_text("id,title,abstract\nu1,T,A\n")
    with pytest.raises(CorpusError, match="cord_uid"):
        CorpusStore(tmp_path / "store").ingest_csv(path)


def test_csv_custom_mapping(tmp_path):
    path = tmp_path / "meta.csv"
    path.write_text("pmid,heading,body\n7,Seven,Body seven\n")
    store = CorpusStore(tmp_path / "store")
    stats = store.ingest_csv(path, {"doc_id": "pmid", "title": "heading",
                                    "abstract": "body"})
    assert stats.n_docs == 1
    assert store.get("7").abstract == "Body seven"


doc_records = st.lists(
    st.fixed_dictionaries({
        "doc_id": st.text(alphabet="abcdef0123456789", min_size=0, max_size=4),
        "title": st.text(min_size=0, max_size=12),
        "abstract": st.text(max_size=12),
    }),
    max_size=25,
)


@given(doc_records)
def test_accounting_invariant(tmp_path_factory, records):
    """n_docs + |rejected| equals the number of input records, always."""
    tmp = tmp_path_factory.mktemp("corpus")
    path = tmp / "corpus.jsonl"
    # json.dumps keeps each record on one line
    write_jsonl(path, records)
    store = CorpusStore(tmp / "store")
    stats = store.ingest_jsonl(path)
    assert stats.n_docs + len(stats.rejected) == len(records)
    assert len(store) == stats.n_docs
    accepted_ids = {r["doc_id"] for r in records if r["doc_id"] and r["title"]}
    assert set(store.doc_ids()) == accepted_ids
