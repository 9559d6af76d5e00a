"""P-I and I-O concept co-occurrence relations and the Sankey graph model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .concepts import (AnnotationStore, ConceptMention, DocAnnotations,
                       PicoType, concept_label, restrict_to_pico_spans,
                       truncate)
from .corpus import CorpusStore
from .index import ScoredHit

SCOPE_FULL = "title+abstract"
SCOPE_ABSTRACT = "abstract"
SCOPES = (SCOPE_FULL, SCOPE_ABSTRACT)

PI = "P-I"
IO = "I-O"


class LinkNotFound(KeyError):
    """Requested Sankey link does not exist."""


@dataclass
class RoleConcepts:
    doc_id: str
    p: frozenset[str] = frozenset()
    i: frozenset[str] = frozenset()
    o: frozenset[str] = frozenset()


@dataclass
class Relation:
    kind: str  # PI or IO
    source: str
    target: str
    doc_ids: set[str] = field(default_factory=set)

    def key(self) -> tuple[str, str, str]:
        return (self.kind, self.source, self.target)


@dataclass(frozen=True)
class SankeyNode:
    id: str
    role: str
    code: str
    label: str


@dataclass(frozen=True)
class SankeyLink:
    source: str
    target: str
    weight: int
    doc_ids: tuple[str, ...]


@dataclass
class SankeyGraph:
    nodes: list[SankeyNode]
    links: list[SankeyLink]

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": n.id, "role": n.role, "code": n.code, "label": n.label}
                      for n in self.nodes],
            "links": [{"source": l.source, "target": l.target,
                       "weight": l.weight, "doc_ids": list(l.doc_ids)}
                      for l in self.links],
        }


def node_id(role: PicoType | str, code: str) -> str:
    role = role.value if isinstance(role, PicoType) else role
    return f"{role}:{code}"


def doc_role_concepts(ann: DocAnnotations, g: int = 1,
                      scope: str = SCOPE_FULL,
                      title_len: int | None = None) -> RoleConcepts:
    """Truncated concept codes per PICO role for one document.

    With abstract-only scope, a mention counts only when it lies entirely
    inside the abstract region of the combined field (title_len required).
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    if scope == SCOPE_ABSTRACT and title_len is None:
        raise ValueError("abstract scope requires title_len")

    def in_scope(m: ConceptMention) -> bool:
        if scope == SCOPE_FULL:
            return True
        return m.start >= title_len + 1

    sets: dict[PicoType, set[str]] = {t: set() for t in PicoType}
    for pico_type, mention in restrict_to_pico_spans(ann):
        if not in_scope(mention):
            continue
        for tree in mention.tree_numbers:
            sets[pico_type].add(truncate(tree, g))
    return RoleConcepts(ann.doc_id,
                        p=frozenset(sets[PicoType.P]),
                        i=frozenset(sets[PicoType.I]),
                        o=frozenset(sets[PicoType.O]))


def relations_from_role_concepts(role_concepts: Iterable[RoleConcepts]) -> list[Relation]:
    """Cross-product P x I and I x O per document, aggregated across documents."""
    agg: dict[tuple[str, str, str], Relation] = {}

    def add(kind: str, source: str, target: str, doc_id: str) -> None:
        key = (kind, source, target)
        rel = agg.get(key)
        if rel is None:
            rel = agg[key] = Relation(kind, source, target)
        rel.doc_ids.add(doc_id)

    for rc in role_concepts:
        for p in rc.p:
            for i in rc.i:
                add(PI, p, i, rc.doc_id)
        for i in rc.i:
            for o in rc.o:
                add(IO, i, o, rc.doc_id)
    return [agg[key] for key in sorted(agg)]


def build_relations(doc_ids: Sequence[str], annotations: AnnotationStore,
                    corpus: CorpusStore | None = None, g: int = 1,
                    scope: str = SCOPE_FULL) -> list[Relation]:
    """Relations over a document set; docs without annotations contribute nothing."""
    role_concepts = []
    for doc_id in doc_ids:
        ann = annotations.get(doc_id)
        if ann is None:
            continue
        title_len = None
        if scope == SCOPE_ABSTRACT:
            doc = corpus.get(doc_id) if corpus else None
            if doc is None:
                continue
            title_len = len(doc.title)
        role_concepts.append(doc_role_concepts(ann, g, scope, title_len))
    return relations_from_role_concepts(role_concepts)


def filter_hits(hits: Sequence[ScoredHit | str], relations: Sequence[Relation]) -> list[str]:
    """Docs from the hit list that appear in at least one relation, in doc_id order."""
    hit_ids = {h if isinstance(h, str) else h.doc_id for h in hits}
    related: set[str] = set()
    for rel in relations:
        related.update(rel.doc_ids)
    return sorted(hit_ids & related)


def to_sankey(relations: Sequence[Relation]) -> SankeyGraph:
    """One node per (role, code) appearing in any relation end; weight = |doc_ids|."""
    node_keys: set[tuple[str, str]] = set()
    for rel in relations:
        if rel.kind == PI:
            node_keys.add(("P", rel.source))
            node_keys.add(("I", rel.target))
        else:
            node_keys.add(("I", rel.source))
            node_keys.add(("O", rel.target))
    role_order = {"P": 0, "I": 1, "O": 2}
    nodes = [SankeyNode(node_id(role, code), role, code, concept_label(code))
             for role, code in sorted(node_keys,
                                      key=lambda rc: (role_order[rc[0]], rc[1]))]
    links = []
    for rel in relations:
        src_role, tgt_role = ("P", "I") if rel.kind == PI else ("I", "O")
        links.append(SankeyLink(node_id(src_role, rel.source),
                                node_id(tgt_role, rel.target),
                                len(rel.doc_ids),
                                tuple(sorted(rel.doc_ids))))
    links.sort(key=lambda l: (l.source, l.target))
    return SankeyGraph(nodes, links)


def relation_documents(graph: SankeyGraph, source: str, target: str) -> list[str]:
    for link in graph.links:
        if link.source == source and link.target == target:
            return list(link.doc_ids)
    raise LinkNotFound(f"no link {source} -> {target}")


@dataclass
class GroupingStats:
    histogram: dict[int, int]
    ratio_gt1: float | None
    max_docs: int


def grouping_stats(relations: Sequence[Relation]) -> GroupingStats:
    """Distribution of documents-per-relation; ratio undefined when empty."""
    if not relations:
        return GroupingStats({}, None, 0)
    histogram: dict[int, int] = {}
    for rel in relations:
        size = len(rel.doc_ids)
        histogram[size] = histogram.get(size, 0) + 1
    n_gt1 = sum(1 for rel in relations if len(rel.doc_ids) > 1)
    return GroupingStats(histogram, n_gt1 / len(relations),
                         max(len(rel.doc_ids) for rel in relations))
