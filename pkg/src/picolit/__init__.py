"""PICO-filtered literature search with Sankey relations and TREC evaluation."""

from .concepts import (AnnotationStore, ConceptMention, DocAnnotations,
                       LexiconEntry, MeshTreeNumber, PicoSpan, PicoType,
                       lexicon_tag, load_lexicon, parse_tree_number,
                       restrict_to_pico_spans, truncate)
from .corpus import CorpusStats, CorpusStore, Document
from .evaluation import (CorrelationReport, Qrels, QueryEval, RunEntry,
                         SummaryStats, Topic, compare_views, evaluate_query,
                         parse_qrels, parse_topics, query_fit, read_run,
                         relation_precision_correlation, spearman, write_run)
from .index import InvertedIndex, ScoredHit, tokenize
from .pipeline import SearchParams, Workspace
from .relations import (Relation, RoleConcepts, SankeyGraph, build_relations,
                        doc_role_concepts, filter_hits, grouping_stats,
                        relation_documents, relations_from_role_concepts,
                        to_sankey)

__version__ = "0.1.0"
