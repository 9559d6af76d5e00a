"""TREC test-collection parsing and rank-free retrieval evaluation."""

from __future__ import annotations

import csv
import json
import math
import statistics
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .relations import Relation, SankeyGraph

REPORT_COLUMNS = ["topic_id", "n_rel", "n_irrel", "n_unj",
                  "precision", "precision_judg", "prop_unjudged"]

MAX_RUN_ENTRIES = 1000


class RunFormatError(ValueError):
    """Run file violates the TREC run-format invariants."""


@dataclass
class Qrels:
    judgments: dict[tuple[str, str], int] = field(default_factory=dict)
    rejected: list[tuple[int, str]] = field(default_factory=list)

    def judgment(self, topic_id: str, doc_id: str) -> int | None:
        return self.judgments.get((topic_id, doc_id))

    def is_relevant(self, topic_id: str, doc_id: str) -> bool | None:
        """True for judgments 1 and 2, False for 0, None when unjudged."""
        j = self.judgment(topic_id, doc_id)
        return None if j is None else j >= 1


def parse_qrels(path: str | Path) -> Qrels:
    """Whitespace-separated lines: topic iteration doc_id judgment."""
    qrels = Qrels()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                qrels.rejected.append((line_no, "wrong field count"))
                continue
            topic_id, _iteration, doc_id, raw = parts
            if raw not in ("0", "1", "2"):
                qrels.rejected.append((line_no, "judgment out of domain"))
                continue
            if (topic_id, doc_id) in qrels.judgments:
                qrels.rejected.append((line_no, "duplicate"))
                continue
            qrels.judgments[(topic_id, doc_id)] = int(raw)
    return qrels


@dataclass(frozen=True)
class Topic:
    topic_id: str
    query: str
    question: str
    narrative: str


def parse_topics(path: str | Path) -> list[Topic]:
    """Topics from TREC-style XML, or a JSONL fallback with the same keys.

    Topics without a question are dropped: the natural-language question is
    the search text.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    topics = []
    if text.lstrip().startswith("<"):
        root = ET.fromstring(text)
        elems = root.iter("topic")
        for elem in elems:
            number = elem.get("number", "")
            fields = {child.tag: (child.text or "").strip() for child in elem}
            if not number or not fields.get("question"):
                continue
            topics.append(Topic(number, fields.get("query", ""),
                                fields["question"], fields.get("narrative", "")))
    else:
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if not rec.get("question"):
                continue
            topics.append(Topic(str(rec["topic_id"]), rec.get("query", ""),
                                rec["question"], rec.get("narrative", "")))
    return topics


@dataclass(frozen=True)
class RunEntry:
    topic_id: str
    doc_id: str
    rank: int
    score: float
    run_tag: str


def _check_run(entries: Sequence[RunEntry]) -> None:
    by_topic: dict[str, list[RunEntry]] = {}
    for e in entries:
        by_topic.setdefault(e.topic_id, []).append(e)
    for topic_id, group in by_topic.items():
        if len(group) > MAX_RUN_ENTRIES:
            raise RunFormatError(f"topic {topic_id}: more than {MAX_RUN_ENTRIES} entries")
        docs = {e.doc_id for e in group}
        if len(docs) != len(group):
            raise RunFormatError(f"topic {topic_id}: duplicate doc_id")
        ranks = sorted(e.rank for e in group)
        if ranks != list(range(1, len(group) + 1)):
            raise RunFormatError(f"topic {topic_id}: ranks not contiguous from 1")


def write_run(path: str | Path, entries: Sequence[RunEntry]) -> None:
    """TREC run lines: topic Q0 doc rank score tag (score at 6 decimals)."""
    _check_run(entries)
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.topic_id} Q0 {e.doc_id} {e.rank} {e.score:.6f} {e.run_tag}\n")


def read_run(path: str | Path) -> list[RunEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise RunFormatError(f"line {line_no}: expected 6 fields, got {len(parts)}")
            topic_id, _q0, doc_id, rank, score, tag = parts
            entries.append(RunEntry(topic_id, doc_id, int(rank), float(score), tag))
    _check_run(entries)
    return entries


@dataclass
class QueryEval:
    topic_id: str
    n_rel: int
    n_irrel: int
    n_unj: int
    precision: float | None
    precision_judg: float | None
    prop_unjudged: float | None


def evaluate_query(result_docs: Sequence[str], topic_id: str, qrels: Qrels) -> QueryEval:
    """Count relevant/irrelevant/unjudged retrievals; rank plays no role.

    precision uses the full denominator (unjudged included); precision_judg
    ignores unjudged documents. Undefined metrics are None, never 0.
    """
    n_rel = n_irrel = n_unj = 0
    for doc_id in result_docs:
        rel = qrels.is_relevant(topic_id, doc_id)
        if rel is None:
            n_unj += 1
        elif rel:
            n_rel += 1
        else:
            n_irrel += 1
    total = n_rel + n_irrel + n_unj
    judged = n_rel + n_irrel
    return QueryEval(
        topic_id=topic_id,
        n_rel=n_rel, n_irrel=n_irrel, n_unj=n_unj,
        precision=n_rel / total if total else None,
        precision_judg=n_rel / judged if judged else None,
        prop_unjudged=n_unj / total if total else None,
    )


@dataclass
class SummaryStats:
    mean: float
    min: float
    max: float
    median: float
    n: int


def summarize(values: Sequence[float | None]) -> SummaryStats | None:
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return SummaryStats(mean=statistics.fmean(defined), min=min(defined),
                        max=max(defined), median=statistics.median(defined),
                        n=len(defined))


@dataclass
class ViewComparison:
    raw: dict[str, QueryEval]
    filtered: dict[str, QueryEval]
    precision_delta: dict[str, float | None]
    summary: dict[str, dict[str, SummaryStats | None]]  # view -> metric -> stats


def compare_views(raw: dict[str, QueryEval],
                  filtered: dict[str, QueryEval]) -> ViewComparison:
    """Per-topic filtered-minus-raw precision deltas plus per-view summaries."""
    if set(raw) != set(filtered):
        missing = set(raw) ^ set(filtered)
        raise ValueError(f"topic sets differ: {sorted(missing)}")
    deltas = {}
    for topic_id in raw:
        r, f = raw[topic_id].precision, filtered[topic_id].precision
        deltas[topic_id] = None if r is None or f is None else f - r
    summary = {}
    for view_name, view in (("raw", raw), ("filtered", filtered)):
        evals = [view[t] for t in sorted(view)]
        summary[view_name] = {
            "precision": summarize([e.precision for e in evals]),
            "prop_unjudged": summarize([e.prop_unjudged for e in evals]),
        }
    return ViewComparison(raw, filtered, deltas, summary)


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def report_rows(evals: dict[str, QueryEval]) -> list[dict[str, str]]:
    rows = []
    for topic_id in sorted(evals, key=lambda t: (len(t), t)):
        e = evals[topic_id]
        rows.append({
            "topic_id": e.topic_id,
            "n_rel": str(e.n_rel), "n_irrel": str(e.n_irrel), "n_unj": str(e.n_unj),
            "precision": _fmt(e.precision),
            "precision_judg": _fmt(e.precision_judg),
            "prop_unjudged": _fmt(e.prop_unjudged),
        })
    return rows


def write_report_csv(path: str | Path, comparison: ViewComparison) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["view"] + REPORT_COLUMNS)
        for view_name, view in (("raw", comparison.raw), ("filtered", comparison.filtered)):
            for row in report_rows(view):
                writer.writerow([view_name] + [row[c] for c in REPORT_COLUMNS])


def comparison_to_dict(comparison: ViewComparison) -> dict:
    def stats_dict(s: SummaryStats | None):
        if s is None:
            return None
        return {"mean": s.mean, "min": s.min, "max": s.max,
                "median": s.median, "n": s.n}

    return {
        "raw": report_rows(comparison.raw),
        "filtered": report_rows(comparison.filtered),
        "precision_delta": {t: comparison.precision_delta[t]
                            for t in sorted(comparison.precision_delta)},
        "summary": {view: {metric: stats_dict(s) for metric, s in metrics.items()}
                    for view, metrics in comparison.summary.items()},
    }


def write_report_json(path: str | Path, comparison: ViewComparison) -> None:
    Path(path).write_text(
        json.dumps(comparison_to_dict(comparison), indent=2, sort_keys=True),
        encoding="utf-8")


@dataclass
class CorrelationReport:
    rho: float | None
    n_pairs: int


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1  # 1-based average rank across the tie group
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> CorrelationReport:
    """Spearman rank correlation: Pearson on average-tie ranks.

    Zero rank variance on either side yields an undefined (None) rho.
    """
    if len(xs) != len(ys):
        raise ValueError("length mismatch")
    if len(xs) < 2:
        raise ValueError("need at least 2 pairs")
    rx, ry = _average_ranks(xs), _average_ranks(ys)
    n = len(rx)
    mx, my = sum(rx) / n, sum(ry) / n
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0 or syy == 0:
        return CorrelationReport(None, n)
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    return CorrelationReport(sxy / math.sqrt(sxx * syy), n)


@dataclass
class RoleFit:
    matched: int
    total: int
    percentage: float | None


def query_fit(query_concepts: dict[str, set[str]],
              graph: SankeyGraph) -> dict[str, RoleFit]:
    """Per-role share of graph nodes whose code appears in the query's concepts.

    Roles absent from the query annotation are skipped; a role with no graph
    nodes is flagged undefined.
    """
    result = {}
    for role, codes in query_concepts.items():
        if not codes:
            continue
        role_nodes = [n for n in graph.nodes if n.role == role]
        matched = sum(1 for n in role_nodes if n.code in codes)
        total = len(role_nodes)
        result[role] = RoleFit(matched, total,
                               matched / total * 100 if total else None)
    return result


def relation_precision_correlation(
        relations_by_topic: Sequence[tuple[str, Relation]],
        qrels: Qrels,
        judged_only: bool = False) -> CorrelationReport:
    """Correlate relation size with the precision of its document set,
    pooled across topics."""
    if len(relations_by_topic) < 2:
        raise ValueError("need at least 2 relations")
    xs, ys = [], []
    for topic_id, rel in relations_by_topic:
        ev = evaluate_query(sorted(rel.doc_ids), topic_id, qrels)
        precision = ev.precision_judg if judged_only else ev.precision
        if precision is None:
            continue
        xs.append(float(len(rel.doc_ids)))
        ys.append(precision)
    if len(xs) < 2:
        raise ValueError("fewer than 2 relations with defined precision")
    return spearman(xs, ys)
