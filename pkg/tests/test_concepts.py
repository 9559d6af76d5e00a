import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picolit.concepts import (AnnotationStore, ConceptMention, DocAnnotations,
                              LexiconEntry, PicoSpan, PicoType,
                              TreeNumberError, annotations_to_dict,
                              concept_label, lexicon_tag, load_lexicon,
                              parse_tree_number, restrict_to_pico_spans,
                              truncate)
from picolit.corpus import CorpusStore, Document


def test_parse_canada_tree_number():
    tree = parse_tree_number("Z01.107.567.176")
    assert tree.segments == ("Z01", "107", "567", "176")
    assert tree.code == "Z01.107.567.176"


def test_parse_single_segment():
    assert parse_tree_number("D03").segments == ("D03",)


def test_parse_malformed():
    with pytest.raises(TreeNumberError, match="3Z"):
        parse_tree_number("3Z.abc")
    with pytest.raises(TreeNumberError, match="abc"):
        parse_tree_number("Z01.abc")


def test_truncate_worked_examples():
    assert truncate(parse_tree_number("Z01.107.567.176"), 1) == "Z01"
    assert truncate(parse_tree_number("D03.633.100.810.050.180.350"), 1) == "D03"


def test_truncate_shallow_tree():
    assert truncate(parse_tree_number("Z01.107"), 5) == "Z01.107"


def test_truncate_zero_granularity():
    with pytest.raises(ValueError):
        truncate(parse_tree_number("Z01"), 0)


def test_top_level_labels():
    assert concept_label("Z01") == "Geographic Locations"
    assert concept_label("D03") == "Heterocyclic Compounds"
    assert concept_label("Q99") == "Q99"  # unknown codes display the code


tree_numbers = st.builds(
    lambda first, rest: ".".join([first] + rest),
    st.from_regex(r"[A-Z][0-9]{1,3}", fullmatch=True),
    st.lists(st.from_regex(r"[0-9]{1,3}", fullmatch=True), max_size=6),
)


@given(tree_numbers, st.integers(1, 8), st.integers(1, 8))
def test_truncate_idempotent_and_monotone(code, g1, g2):
    g1, g2 = min(g1, g2), max(g1, g2)
    tree = parse_tree_number(code)
    coarse = truncate(tree, g1)
    assert truncate(parse_tree_number(coarse), g1) == coarse
    assert truncate(parse_tree_number(truncate(tree, g2)), g1) == coarse


def mention(start, end, trees=("Z01",)):
    return ConceptMention("d1", start, end, "m",
                          tuple(parse_tree_number(t) for t in trees))


def span(pico, start, end):
    return PicoSpan("d1", PicoType(pico), start, end)


def test_restrict_containment_kept():
    ann = DocAnnotations("d1", [span("P", 5, 20)], [mention(10, 15)])
    assert restrict_to_pico_spans(ann) == [(PicoType.P, ann.mentions[0])]


def test_restrict_straddling_dropped():
    ann = DocAnnotations("d1", [span("P", 5, 20)], [mention(10, 25)])
    assert restrict_to_pico_spans(ann) == []


def test_restrict_overlapping_spans_kept_per_type():
    ann = DocAnnotations("d1", [span("P", 0, 30), span("I", 5, 25)],
                         [mention(10, 15)])
    kept = restrict_to_pico_spans(ann)
    assert len(kept) == 2
    assert {t for t, _ in kept} == {PicoType.P, PicoType.I}


@given(st.lists(st.tuples(st.sampled_from("PIO"), st.integers(0, 30),
                          st.integers(1, 30)), max_size=6),
       st.lists(st.tuples(st.integers(0, 30), st.integers(1, 30)), max_size=6))
def test_restrict_never_invents_mentions(raw_spans, raw_mentions):
    spans = [span(p, min(a, b), max(a, b) + 1) for p, a, b in raw_spans]
    mentions = [mention(min(a, b), max(a, b) + 1) for a, b in raw_mentions]
    ann = DocAnnotations("d1", spans, mentions)
    kept = restrict_to_pico_spans(ann)
    for _t, m in kept:
        assert m in mentions


def make_corpus(tmp_path, docs):
    path = tmp_path / "corpus.jsonl"
    with open(path, "w") as fh:
        for doc_id, title, abstract in docs:
            fh.write(json.dumps({"doc_id": doc_id, "title": title,
                                 "abstract": abstract}) + "\n")
    store = CorpusStore(tmp_path / "store")
    store.ingest_jsonl(path)
    return store


def ann_line(doc_id, spans, mentions):
    return json.dumps({
        "doc_id": doc_id,
        "spans": [{"type": t, "start": s, "end": e} for t, s, e in spans],
        "mentions": [{"start": s, "end": e, "label": lbl, "tree_numbers": trees}
                     for s, e, lbl, trees in mentions],
    })


def test_import_empty(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "title here", "abstract")])
    path = tmp_path / "ann.jsonl"
    path.write_text("")
    stats = AnnotationStore(tmp_path / "store").import_annotations(path, corpus)
    assert (stats.n_docs, stats.n_spans, stats.n_mentions) == (0, 0, 0)


def test_import_counts(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "some title", "and abstract text")])
    path = tmp_path / "ann.jsonl"
    path.write_text(ann_line("d1",
                             [("P", 0, 10), ("I", 11, 20)],
                             [(0, 4, "some", ["C18.452"]),
                              (5, 10, "title", ["D03"]),
                              (11, 14, "and", ["Z01.107"])]) + "\n")
    stats = AnnotationStore(tmp_path / "store").import_annotations(path, corpus)
    assert (stats.n_docs, stats.n_spans, stats.n_mentions) == (1, 2, 3)


def test_import_offset_out_of_range_rejected(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "short", "")])
    path = tmp_path / "ann.jsonl"
    path.write_text(ann_line("d1", [], [(0, 99, "x", ["Z01"])]) + "\n")
    stats = AnnotationStore(tmp_path / "store").import_annotations(path, corpus)
    assert stats.n_docs == 0
    assert stats.rejected == [(1, "offset")]


def test_import_unknown_doc_rejected(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "short", "")])
    path = tmp_path / "ann.jsonl"
    path.write_text(ann_line("ghost", [], []) + "\n")
    stats = AnnotationStore(tmp_path / "store").import_annotations(path, corpus)
    assert stats.rejected == [(1, "unknown doc_id")]


def test_import_export_roundtrip(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "some title", "and abstract text"),
                                    ("d2", "another title", "more words here")])
    path = tmp_path / "ann.jsonl"
    lines = [
        ann_line("d1", [("P", 0, 10)], [(0, 4, "some", ["C18.452", "D03"])]),
        ann_line("d2", [("O", 2, 9)], [(3, 8, "other", ["Z01.107.567"])]),
    ]
    path.write_text("\n".join(lines) + "\n")
    store = AnnotationStore(tmp_path / "store")
    store.import_annotations(path, corpus)
    out = tmp_path / "out.jsonl"
    store.export_annotations(out)
    exported = [json.loads(l) for l in out.read_text().splitlines()]
    original = [json.loads(l) for l in lines]
    assert exported == sorted(original, key=lambda r: r["doc_id"])


def test_store_survives_restart(tmp_path):
    corpus = make_corpus(tmp_path, [("d1", "some title", "words")])
    path = tmp_path / "ann.jsonl"
    path.write_text(ann_line("d1", [("P", 0, 4)], [(0, 4, "some", ["Z01"])]) + "\n")
    AnnotationStore(tmp_path / "store").import_annotations(path, corpus)
    reopened = AnnotationStore(tmp_path / "store")
    assert reopened.get("d1") is not None
    assert len(reopened.get("d1").mentions) == 1


LEXICON = [
    LexiconEntry("diabetes", (parse_tree_number("C18.452.394.750"),), PicoType.P),
    LexiconEntry("insulin", (parse_tree_number("D08.811"),), PicoType.I),
    LexiconEntry("insulin resistance", (parse_tree_number("C18.452.394"),), PicoType.P),
]


def test_lexicon_tag_direct_match():
    doc = Document("d1", "diabetes treated", "with insulin")
    ann = lexicon_tag(doc, LEXICON[:2])
    assert len(ann.spans) == 2
    assert len(ann.mentions) == 2
    assert ann.spans[0].pico_type == PicoType.P
    assert ann.mentions[0].label == "diabetes"
    text = doc.combined_field()
    for m in ann.mentions:
        assert text[m.start:m.end].lower() == m.label.lower()


def test_lexicon_tag_longest_match_wins():
    doc = Document("d1", "insulin resistance study", "")
    ann = lexicon_tag(doc, LEXICON)
    assert len(ann.mentions) == 1
    assert ann.mentions[0].label == "insulin resistance"
    assert ann.spans[0].pico_type == PicoType.P


def test_lexicon_tag_empty_lexicon():
    ann = lexicon_tag(Document("d1", "anything", "at all"), [])
    assert ann.spans == [] and ann.mentions == []


def test_lexicon_tag_token_boundary():
    # "insulinoma" must not match "insulin"
    ann = lexicon_tag(Document("d1", "insulinoma cases", ""), LEXICON[:2])
    assert ann.mentions == []


def test_lexicon_tag_case_insensitive():
    ann = lexicon_tag(Document("d1", "Diabetes And INSULIN", ""), LEXICON[:2])
    assert [m.label for m in ann.mentions] == ["Diabetes", "INSULIN"]


def test_lexicon_tag_no_overlaps():
    doc = Document("d1", "insulin resistance insulin diabetes", "")
    ann = lexicon_tag(doc, LEXICON)
    spans = sorted((s.start, s.end) for s in ann.spans)
    for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
        assert e1 <= s2


def test_load_lexicon(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text("diabetes\tC18.452;C19.246\tP\ninsulin\tD08.811\tI\n")
    entries = load_lexicon(path)
    assert len(entries) == 2
    assert entries[0].tree_numbers[1].code == "C19.246"
    assert entries[1].pico_type == PicoType.I


def test_annotations_to_dict_schema():
    ann = DocAnnotations("d1", [span("P", 0, 4)], [mention(0, 4, ["Z01.107"])])
    d = annotations_to_dict(ann)
    assert d == {"doc_id": "d1",
                 "spans": [{"type": "P", "start": 0, "end": 4}],
                 "mentions": [{"start": 0, "end": 4, "label": "m",
                               "tree_numbers": ["Z01.107"]}]}
