"""Document collection: ingest from JSONL/CSV, persist, look up by id."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

DOCS_FILE = "docs.jsonl"

# Default CSV column mapping targets the CORD-19 metadata.csv layout.
DEFAULT_COLUMN_MAP = {"doc_id": "cord_uid", "title": "title", "abstract": "abstract"}


class CorpusError(Exception):
    """Fatal corpus ingest problem (unreadable file, missing column)."""


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    abstract: str = ""

    def combined_field(self) -> str:
        """The single indexed/annotated field: title, a space, then abstract."""
        return self.title + " " + self.abstract


@dataclass
class CorpusStats:
    n_docs: int = 0
    n_empty_abstract: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)


class CorpusStore:
    """On-disk document store under a directory; immutable after ingest.

    Documents live in ``docs.jsonl`` inside the store directory so the
    index and relation stages can reload them across process restarts.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._docs: dict[str, Document] = {}
        docs_path = self.root / DOCS_FILE
        if docs_path.exists():
            with docs_path.open(encoding="utf-8") as fh:
                for line in fh:
                    rec = json.loads(line)
                    doc = Document(rec["doc_id"], rec["title"], rec.get("abstract", ""))
                    self._docs[doc.doc_id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self):
        return iter(self._docs.values())

    def doc_ids(self) -> list[str]:
        return sorted(self._docs)

    def get(self, doc_id: str) -> Document | None:
        return self._docs.get(doc_id)

    def _add(self, line_no: int, doc_id, title, abstract, stats: CorpusStats) -> None:
        if not isinstance(doc_id, str) or not doc_id:
            stats.rejected.append((line_no, "missing doc_id"))
            return
        if not isinstance(title, str) or not title:
            stats.rejected.append((line_no, "empty title"))
            return
        if doc_id in self._docs:
            stats.rejected.append((line_no, "duplicate"))
            return
        abstract = abstract if isinstance(abstract, str) else ""
        self._docs[doc_id] = Document(doc_id, title, abstract)
        stats.n_docs += 1
        if not abstract:
            stats.n_empty_abstract += 1

    def ingest_jsonl(self, path: str | Path) -> CorpusStats:
        """Ingest one JSON object per line with keys doc_id/title/abstract."""
        stats = CorpusStats()
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
        with fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    stats.rejected.append((line_no, "invalid json"))
                    continue
                if not isinstance(rec, dict):
                    stats.rejected.append((line_no, "not an object"))
                    continue
                self._add(line_no, rec.get("doc_id"), rec.get("title"),
                          rec.get("abstract", ""), stats)
        self._persist()
        return stats

    def ingest_csv(self, path: str | Path,
                   column_map: dict[str, str] | None = None) -> CorpusStats:
        """Ingest a CSV with a header row, mapping columns onto document fields."""
        colmap = dict(DEFAULT_COLUMN_MAP)
        if column_map:
            colmap.update(column_map)
        stats = CorpusStats()
        try:
            fh = open(path, encoding="utf-8", newline="")
        except OSError as exc:
            raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
        with fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for role, col in colmap.items():
                if col not in header:
                    raise CorpusError(f"mapped column {col!r} (for {role}) not in header")
            for line_no, row in enumerate(reader, 2):
                self._add(line_no, row.get(colmap["doc_id"]),
                          row.get(colmap["title"]),
                          row.get(colmap["abstract"]) or "", stats)
        self._persist()
        return stats

    def _persist(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        with (self.root / DOCS_FILE).open("w", encoding="utf-8") as fh:
            for doc_id in sorted(self._docs):
                doc = self._docs[doc_id]
                fh.write(json.dumps(
                    {"doc_id": doc.doc_id, "title": doc.title, "abstract": doc.abstract},
                    ensure_ascii=False) + "\n")
