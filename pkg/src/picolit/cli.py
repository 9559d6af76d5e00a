"""Command-line interface: ingest, annotate, index, search, sankey, eval, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .concepts import AnnotationStore, lexicon_tag, load_lexicon
from .corpus import CorpusStore
from .evaluation import parse_qrels, parse_topics, write_report_csv, write_report_json
from .index import InvertedIndex
from .pipeline import (INDEX_FILE, SearchParams, Workspace, eval_report_dict,
                       search_response_json)
from .relations import SCOPE_FULL, SCOPES


def _store_dir(args) -> Path:
    store = args.store or os.environ.get("PICOLIT_STORE")
    if not store:
        sys.exit("error: no store directory (use --store or PICOLIT_STORE)")
    return Path(store)


def _search_params(args) -> SearchParams:
    return SearchParams(k=args.k, scorer=args.scorer,
                        granularity=args.granularity, scope=args.scope)


def cmd_ingest(args) -> None:
    store = CorpusStore(_store_dir(args))
    if args.format == "jsonl":
        stats = store.ingest_jsonl(args.path)
    else:
        colmap = json.loads(args.column_map) if args.column_map else None
        stats = store.ingest_csv(args.path, colmap)
    print(f"ingested {stats.n_docs} documents "
          f"({stats.n_empty_abstract} with empty abstract, "
          f"{len(stats.rejected)} rejected)")
    for line_no, reason in stats.rejected:
        print(f"  rejected line {line_no}: {reason}", file=sys.stderr)


def cmd_annotate(args) -> None:
    store_dir = _store_dir(args)
    corpus = CorpusStore(store_dir)
    annotations = AnnotationStore(store_dir)
    if args.lexicon:
        lexicon = load_lexicon(args.lexicon)
        n_spans = n_mentions = n_docs = 0
        for doc in corpus:
            ann = lexicon_tag(doc, lexicon)
            if ann.spans:
                annotations.put(ann)
                n_docs += 1
                n_spans += len(ann.spans)
                n_mentions += len(ann.mentions)
        annotations.persist()
        print(f"tagged {n_docs} documents: {n_spans} spans, {n_mentions} mentions")
    else:
        stats = annotations.import_annotations(args.annotations, corpus)
        print(f"imported {stats.n_docs} documents: {stats.n_spans} spans, "
              f"{stats.n_mentions} mentions, {len(stats.rejected)} rejected")
        for line_no, reason in stats.rejected:
            print(f"  rejected line {line_no}: {reason}", file=sys.stderr)


def cmd_index(args) -> None:
    store_dir = _store_dir(args)
    corpus = CorpusStore(store_dir)
    index = InvertedIndex(remove_stopwords=args.stopwords)
    index.build(corpus)
    index.save(store_dir / INDEX_FILE)
    print(f"indexed {index.n_docs} documents, "
          f"{len(index.postings)} terms, avg length {index.avg_doc_len:.2f}")


def cmd_search(args) -> None:
    ws = Workspace(_store_dir(args))
    response = ws.search_response(args.query, _search_params(args))
    if args.run_tag:
        for hit in response["hits"]:
            print(f"{args.topic} Q0 {hit['doc_id']} {hit['rank']} "
                  f"{hit['score']:.6f} {args.run_tag}")
    else:
        print(search_response_json(response))


def cmd_sankey(args) -> None:
    ws = Workspace(_store_dir(args))
    response = ws.search_response(args.query, _search_params(args))
    print(json.dumps(response["sankey"], sort_keys=True, indent=2))


def cmd_eval(args) -> None:
    ws = Workspace(_store_dir(args))
    topics = parse_topics(args.topics)
    qrels = parse_qrels(args.qrels)
    comparison, fractions = ws.eval_run(topics, qrels, _search_params(args))
    out = Path(args.out) if args.out else ws.store_dir
    out.mkdir(parents=True, exist_ok=True)
    write_report_csv(out / "eval_report.csv", comparison)
    write_report_json(out / "eval_report.json", comparison)
    report = eval_report_dict(comparison, fractions)
    (out / "eval_report_full.json").write_text(
        json.dumps(report, indent=2, sort_keys=True), encoding="utf-8")
    for view in ("raw", "filtered"):
        stats = comparison.summary[view]["precision"]
        if stats:
            print(f"{view}: median precision {stats.median:.4f} "
                  f"(mean {stats.mean:.4f}, n={stats.n})")
    print(f"report written to {out / 'eval_report.csv'}")


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    app = create_app(_store_dir(args), args.topics, args.qrels)
    uvicorn.run(app, host=args.host, port=args.port)


def _add_search_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--scorer", choices=["bm25", "tfidf"], default="bm25")
    p.add_argument("--granularity", type=int, default=1)
    p.add_argument("--scope", choices=list(SCOPES), default=SCOPE_FULL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="picolit")
    parser.add_argument("--store", help="store directory (or PICOLIT_STORE)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a corpus into the store")
    p.add_argument("path")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--column-map", dest="column_map",
                   help='JSON object, e.g. {"doc_id": "cord_uid"}')
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("annotate", help="import annotations or run the lexicon tagger")
    p.add_argument("--annotations", help="annotations JSONL to import")
    p.add_argument("--lexicon", help="lexicon TSV for the fallback tagger")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("index", help="build and persist the inverted index")
    p.add_argument("--stopwords", action="store_true")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run a query against the store")
    p.add_argument("query")
    _add_search_params(p)
    p.add_argument("--run-tag", dest="run_tag", help="emit TREC run lines")
    p.add_argument("--topic", default="0", help="topic id for run lines")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sankey", help="print the Sankey graph for a query")
    p.add_argument("query")
    _add_search_params(p)
    p.set_defaults(func=cmd_sankey)

    p = sub.add_parser("eval", help="raw vs filtered evaluation over topics")
    p.add_argument("--topics", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--out", help="output directory (default: store)")
    _add_search_params(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--topics")
    p.add_argument("--qrels")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
