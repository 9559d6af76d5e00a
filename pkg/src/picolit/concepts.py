"""PICO spans, MeSH concept mentions, tree-number truncation, lexicon tagger."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .corpus import CorpusStore, Document

ANNOTATIONS_FILE = "annotations.jsonl"

_FIRST_SEGMENT_RE = re.compile(r"^[A-Z][0-9]+$")
_SEGMENT_RE = re.compile(r"^[0-9]+$")

# Display labels for common granularity-1 MeSH codes; unknown codes fall
# back to the code itself.
MESH_TOP_LEVEL_LABELS = {
    "A01": "Body Regions",
    "B01": "Eukaryota",
    "B04": "Viruses",
    "C01": "Infections",
    "C08": "Respiratory Tract Diseases",
    "C14": "Cardiovascular Diseases",
    "C18": "Nutritional and Metabolic Diseases",
    "C23": "Pathological Conditions, Signs and Symptoms",
    "D03": "Heterocyclic Compounds",
    "D04": "Polycyclic Compounds",
    "D06": "Hormones, Hormone Substitutes, and Hormone Antagonists",
    "D08": "Enzymes and Coenzymes",
    "D27": "Chemical Actions and Uses",
    "E02": "Therapeutics",
    "E05": "Investigative Techniques",
    "F01": "Behavior and Behavior Mechanisms",
    "G03": "Metabolism",
    "M01": "Persons",
    "N06": "Environment and Public Health",
    "Z01": "Geographic Locations",
}


def concept_label(code: str) -> str:
    return MESH_TOP_LEVEL_LABELS.get(code, code)


class TreeNumberError(ValueError):
    """Malformed MeSH tree number."""


class PicoType(str, Enum):
    P = "P"
    I = "I"
    O = "O"


@dataclass(frozen=True)
class MeshTreeNumber:
    segments: tuple[str, ...]

    @property
    def code(self) -> str:
        return ".".join(self.segments)

    def __str__(self) -> str:
        return self.code


def parse_tree_number(text: str) -> MeshTreeNumber:
    """Parse a dot-separated MeSH tree number such as Z01.107.567.176."""
    segments = text.split(".")
    if not segments or not _FIRST_SEGMENT_RE.match(segments[0]):
        raise TreeNumberError(f"bad first segment {segments[0]!r} in {text!r}")
    for seg in segments[1:]:
        if not _SEGMENT_RE.match(seg):
            raise TreeNumberError(f"bad segment {seg!r} in {text!r}")
    return MeshTreeNumber(tuple(segments))


def truncate(tree: MeshTreeNumber, g: int) -> str:
    """Keep the first g segments (the whole code if the tree is shallower)."""
    if g < 1:
        raise ValueError("granularity must be >= 1")
    return ".".join(tree.segments[:g])


@dataclass(frozen=True)
class PicoSpan:
    doc_id: str
    pico_type: PicoType
    start: int
    end: int


@dataclass(frozen=True)
class ConceptMention:
    doc_id: str
    start: int
    end: int
    label: str
    tree_numbers: tuple[MeshTreeNumber, ...]


@dataclass
class DocAnnotations:
    doc_id: str
    spans: list[PicoSpan] = field(default_factory=list)
    mentions: list[ConceptMention] = field(default_factory=list)


def restrict_to_pico_spans(ann: DocAnnotations) -> list[tuple[PicoType, ConceptMention]]:
    """Keep mentions fully contained in a PICO span, once per enclosing span."""
    kept = []
    for span in ann.spans:
        for mention in ann.mentions:
            if span.start <= mention.start and mention.end <= span.end:
                kept.append((span.pico_type, mention))
    return kept


def annotations_to_dict(ann: DocAnnotations) -> dict:
    return {
        "doc_id": ann.doc_id,
        "spans": [{"type": s.pico_type.value, "start": s.start, "end": s.end}
                  for s in ann.spans],
        "mentions": [{"start": m.start, "end": m.end, "label": m.label,
                      "tree_numbers": [t.code for t in m.tree_numbers]}
                     for m in ann.mentions],
    }


def annotations_from_dict(rec: dict) -> DocAnnotations:
    doc_id = rec["doc_id"]
    spans = [PicoSpan(doc_id, PicoType(s["type"]), int(s["start"]), int(s["end"]))
             for s in rec.get("spans", [])]
    mentions = [ConceptMention(doc_id, int(m["start"]), int(m["end"]), m["label"],
                               tuple(parse_tree_number(t) for t in m["tree_numbers"]))
                for m in rec.get("mentions", [])]
    return DocAnnotations(doc_id, spans, mentions)


@dataclass
class AnnotationStats:
    n_docs: int = 0
    n_spans: int = 0
    n_mentions: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)


class AnnotationStore:
    """Per-document annotations persisted as JSONL next to the corpus."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._by_doc: dict[str, DocAnnotations] = {}
        path = self.root / ANNOTATIONS_FILE
        if path.exists():
            with path.open(encoding="utf-8") as fh:
                for line in fh:
                    ann = annotations_from_dict(json.loads(line))
                    self._by_doc[ann.doc_id] = ann

    def get(self, doc_id: str) -> DocAnnotations | None:
        return self._by_doc.get(doc_id)

    def doc_ids(self) -> list[str]:
        return sorted(self._by_doc)

    def put(self, ann: DocAnnotations) -> None:
        self._by_doc[ann.doc_id] = ann

    def _offsets_valid(self, ann: DocAnnotations, field_len: int) -> bool:
        for s in ann.spans:
            if not (0 <= s.start < s.end <= field_len):
                return False
        for m in ann.mentions:
            if not (0 <= m.start < m.end <= field_len):
                return False
            if not m.tree_numbers:
                return False
        return True

    def import_annotations(self, path: str | Path, corpus: CorpusStore) -> AnnotationStats:
        """Load one DocAnnotations object per JSONL line, validating offsets."""
        stats = AnnotationStats()
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    ann = annotations_from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError, ValueError):
                    stats.rejected.append((line_no, "malformed"))
                    continue
                doc = corpus.get(ann.doc_id)
                if doc is None:
                    stats.rejected.append((line_no, "unknown doc_id"))
                    continue
                if not self._offsets_valid(ann, len(doc.combined_field())):
                    stats.rejected.append((line_no, "offset"))
                    continue
                self._by_doc[ann.doc_id] = ann
                stats.n_docs += 1
                stats.n_spans += len(ann.spans)
                stats.n_mentions += len(ann.mentions)
        self.persist()
        return stats

    def export_annotations(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for doc_id in sorted(self._by_doc):
                fh.write(json.dumps(annotations_to_dict(self._by_doc[doc_id]),
                                    ensure_ascii=False) + "\n")

    def persist(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        self.export_annotations(self.root / ANNOTATIONS_FILE)


@dataclass(frozen=True)
class LexiconEntry:
    phrase: str
    tree_numbers: tuple[MeshTreeNumber, ...]
    pico_type: PicoType


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    """Read a TSV lexicon: phrase <tab> semicolon-joined tree numbers <tab> P|I|O."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            phrase, trees, pico = line.split("\t")
            entries.append(LexiconEntry(
                phrase,
                tuple(parse_tree_number(t) for t in trees.split(";")),
                PicoType(pico),
            ))
    return entries


def lexicon_tag(doc: Document, lexicon: list[LexiconEntry]) -> DocAnnotations:
    """Tag a document by case-insensitive, token-boundary, longest-match-first
    lexicon lookup over title+abstract.

    Each match emits one PICO span covering the matched range and one concept
    mention with the entry's tree numbers.
    """
    text = doc.combined_field()
    lower = text.lower()
    by_length = sorted((e for e in lexicon if e.phrase),
                       key=lambda e: -len(e.phrase))
    ann = DocAnnotations(doc.doc_id)
    pos = 0
    while pos < len(lower):
        if pos > 0 and lower[pos - 1].isalnum():
            pos += 1
            continue
        matched = None
        for entry in by_length:
            phrase = entry.phrase.lower()
            end = pos + len(phrase)
            if lower.startswith(phrase, pos) and (end == len(lower) or not lower[end].isalnum()):
                matched = (entry, end)
                break
        if matched is None:
            pos += 1
            continue
        entry, end = matched
        ann.spans.append(PicoSpan(doc.doc_id, entry.pico_type, pos, end))
        ann.mentions.append(ConceptMention(doc.doc_id, pos, end,
                                           text[pos:end], entry.tree_numbers))
        pos = end
    return ann
