"""HTTP JSON service exposing search, Sankey drilldown, and evaluation."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .evaluation import parse_qrels, parse_topics, write_report_csv, write_report_json
from .pipeline import (SearchParams, StoreNotLoaded, Workspace,
                       eval_report_dict, search_response_json)
from .relations import SCOPE_FULL, SCOPES, LinkNotFound


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message})


class EvalRequest(BaseModel):
    topics_path: str
    qrels_path: str
    scorer: str = "bm25"
    granularity: int = 1
    scope: str = SCOPE_FULL
    k: int = 1000


def create_app(store_dir: str | Path,
               topics_path: str | Path | None = None,
               qrels_path: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="picolit")
    state = {"workspace": None, "error": None}
    try:
        state["workspace"] = Workspace(store_dir, topics_path, qrels_path)
    except (StoreNotLoaded, FileNotFoundError) as exc:
        state["error"] = str(exc)

    def workspace() -> Workspace | None:
        return state["workspace"]

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return _error(400, "bad_request", str(exc))

    @app.get("/health")
    def health():
        ws = workspace()
        return {"status": "ok" if ws else "unavailable",
                "n_docs": len(ws.corpus) if ws else 0}

    @app.get("/topics")
    def topics():
        ws = workspace()
        if ws is None:
            return _error(503, "store_not_loaded", state["error"] or "store not loaded")
        return [{"topic_id": t.topic_id, "query": t.query,
                 "question": t.question, "narrative": t.narrative}
                for t in ws.topics]

    @app.get("/search")
    def search(q: str = "", k: int = 1000, scorer: str = "bm25",
               granularity: int = 1, scope: str = SCOPE_FULL):
        ws = workspace()
        if ws is None:
            return _error(503, "store_not_loaded", state["error"] or "store not loaded")
        if not q:
            return _error(400, "missing_query", "q parameter is required")
        if scope not in SCOPES:
            return _error(400, "bad_scope", f"scope must be one of {SCOPES}")
        params = SearchParams(k=k, scorer=scorer, granularity=granularity, scope=scope)
        body = search_response_json(ws.search_response(q, params))
        return Response(content=body, media_type="application/json")

    @app.get("/relation-docs")
    def relation_docs(q: str = "", source: str = "", target: str = "",
                      k: int = 1000, scorer: str = "bm25", granularity: int = 1,
                      scope: str = SCOPE_FULL, offset: int = 0, limit: int = 100):
        ws = workspace()
        if ws is None:
            return _error(503, "store_not_loaded", state["error"] or "store not loaded")
        if not q or not source or not target:
            return _error(400, "missing_params", "q, source and target are required")
        params = SearchParams(k=k, scorer=scorer, granularity=granularity, scope=scope)
        try:
            rows = ws.relation_docs(q, source, target, params, offset, limit)
        except LinkNotFound:
            return _error(404, "link_not_found", f"no link {source} -> {target}")
        return rows

    @app.post("/eval")
    def run_eval(req: EvalRequest):
        ws = workspace()
        if ws is None:
            return _error(503, "store_not_loaded", state["error"] or "store not loaded")
        topics_file, qrels_file = Path(req.topics_path), Path(req.qrels_path)
        if not topics_file.exists() or not qrels_file.exists():
            return _error(400, "missing_input", "topics_path and qrels_path must exist")
        topic_list = parse_topics(topics_file)
        qrels = parse_qrels(qrels_file)
        params = SearchParams(k=req.k, scorer=req.scorer,
                              granularity=req.granularity, scope=req.scope)
        comparison, fractions = ws.eval_run(topic_list, qrels, params)
        report = eval_report_dict(comparison, fractions)
        write_report_csv(ws.store_dir / "eval_report.csv", comparison)
        write_report_json(ws.store_dir / "eval_report.json", comparison)
        return report

    return app
