"""HTTP API over parse graphs and dialogue sessions.

Stores are in-memory; parse graphs, ontologies, and policies are uploaded
once and referenced by id when opening sessions. Every non-success
response body is one error object {code, message, detail?} with code in
{bad_request, not_found, unprocessable, internal}.
"""

from __future__ import annotations

import itertools
import threading
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from pgx import pg as pgmod
from pgx.explain import Explanation
from pgx.ontology import Ontology, OntologyParseError, load_ontology
from pgx.policy import PolicyTable, default_table, load_policy
from pgx.question import (
    QUESTION_FORMS,
    SlotMention,
    UnrecognizedQuestionError,
)
from pgx.session import Session, TurnResult
from pgx.whatif import ConsequenceReport, modification_to_dict


def _error(
    status: int, code: str, message: str, detail: Optional[Any] = None
) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=status, content=body)


def _violations_payload(report) -> list[dict]:
    return [
        {"rule": v.rule, "subject": v.subject, "message": v.message} for v in report
    ]


def _slot_payload(m: Optional[SlotMention]) -> Optional[dict]:
    if m is None:
        return None
    out: dict = {"concept": m.concept}
    if m.count is not None:
        out["count"] = m.count
    if m.scene is not None:
        out["scene"] = m.scene
    if m.attribute is not None:
        out["attribute"] = {"name": m.attribute[0], "value": m.attribute[1]}
    return out


def _consequences_payload(report: ConsequenceReport) -> dict:
    return {
        "ontology": [
            {"rule": v.rule, "concepts": list(v.concepts), "scene": v.scene}
            for v in report.ontology
        ],
        "discourse": [
            {
                "relation": d.relation,
                "scene": d.scene,
                "node": d.node,
                "label": d.label,
            }
            for d in report.discourse
        ],
        "feasibility": [
            {"node": f.node, "kind": f.kind, "before": f.before, "after": f.after}
            for f in report.feasibility
        ],
    }


def _forms_payload() -> list[dict]:
    return [{"type": t.value, "example": example} for t, example in QUESTION_FORMS]


def _ask_payload(result: TurnResult) -> dict:
    q = result.question
    selection = result.selection
    evidence = (
        [item.to_dict() for item in selection.explanation.evidence]
        if selection.explanation is not None
        else []
    )
    payload: dict = {
        "question_type": q.qtype.value,
        "slots": {
            "x": _slot_payload(q.x),
            "y": _slot_payload(q.y),
            "x2": _slot_payload(q.x2),
        },
        "selected_type": selection.etype.value if selection.etype else None,
        "text": selection.text,
        "evidence": evidence,
        "ranked_types": [e.value for e in selection.ranked],
        "attempts": [
            {"type": e.value, "reason": reason} for e, reason in selection.attempts
        ],
    }
    if result.consequences is not None:
        payload["consequences"] = _consequences_payload(result.consequences)
    return payload


class Store:
    def __init__(self) -> None:
        self.pgs: dict[str, pgmod.ParseGraph] = {}
        self.ontologies: dict[str, Ontology] = {}
        self.policies: dict[str, PolicyTable] = {}
        self.sessions: dict[str, Session] = {}
        self.session_pg: dict[str, str] = {}
        self._lock = threading.Lock()
        self._counters = {"pg": itertools.count(1), "onto": itertools.count(1),
                          "policy": itertools.count(1), "session": itertools.count(1)}

    def next_id(self, kind: str) -> str:
        with self._lock:
            return f"{kind}-{next(self._counters[kind])}"


def create_app() -> FastAPI:
    app = FastAPI(title="parse-graph explanation service", docs_url=None, redoc_url=None)
    # the browser client is served from its own origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = Store()
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", "malformed request body", detail=exc.errors())

    @app.exception_handler(Exception)
    async def on_internal(request: Request, exc: Exception):
        return _error(500, "internal", f"internal error: {exc}")

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/pg", status_code=201)
    async def upload_pg(request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            graph = pgmod.load(text)
        except pgmod.PgValidationError as e:
            return _error(
                422,
                "unprocessable",
                "parse graph breaks invariants",
                detail=_violations_payload(e.report),
            )
        except pgmod.PgFormatError as e:
            return _error(422, "unprocessable", str(e))
        pg_id = store.next_id("pg")
        store.pgs[pg_id] = graph
        return {"id": pg_id}

    @app.get("/pg/{pg_id}")
    async def get_pg(pg_id: str):
        graph = store.pgs.get(pg_id)
        if graph is None:
            return _error(404, "not_found", f"no parse graph {pg_id!r}")
        return Response(content=pgmod.save(graph), media_type="application/json")

    @app.post("/ontologies", status_code=201)
    async def upload_ontology(request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            onto = load_ontology(text)
        except OntologyParseError as e:
            return _error(422, "unprocessable", str(e))
        onto_id = store.next_id("onto")
        store.ontologies[onto_id] = onto
        return {"id": onto_id}

    @app.post("/policies", status_code=201)
    async def upload_policy(request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            table = load_policy(text)
        except ValueError as e:
            return _error(422, "unprocessable", str(e))
        policy_id = store.next_id("policy")
        store.policies[policy_id] = table
        return {"id": policy_id}

    @app.post("/sessions", status_code=201)
    async def open_session(body: dict):
        pg_id = body.get("pg_id")
        if not isinstance(pg_id, str):
            return _error(400, "bad_request", "pg_id is required")
        graph = store.pgs.get(pg_id)
        if graph is None:
            return _error(404, "not_found", f"no parse graph {pg_id!r}")
        onto = Ontology()
        if "ontology_id" in body and body["ontology_id"] is not None:
            onto_candidate = store.ontologies.get(body["ontology_id"])
            if onto_candidate is None:
                return _error(404, "not_found", f"no ontology {body['ontology_id']!r}")
            onto = onto_candidate
        policy = default_table()
        if "policy_id" in body and body["policy_id"] is not None:
            policy_candidate = store.policies.get(body["policy_id"])
            if policy_candidate is None:
                return _error(404, "not_found", f"no policy {body['policy_id']!r}")
            policy = policy_candidate
        session_id = store.next_id("session")
        store.sessions[session_id] = Session(
            session_id, graph, ontology=onto, policy=policy
        )
        store.session_pg[session_id] = pg_id
        return {"id": session_id}

    @app.post("/sessions/{session_id}/ask")
    async def ask(session_id: str, body: dict):
        session = store.sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        text = body.get("text")
        if not isinstance(text, str):
            return _error(400, "bad_request", "text is required")
        try:
            result = session.ask(text)
        except UnrecognizedQuestionError as e:
            return _error(
                422,
                "unprocessable",
                str(e),
                detail={"cues": e.partial, "forms": _forms_payload()},
            )
        return _ask_payload(result)

    @app.post("/sessions/{session_id}/reset", status_code=204)
    async def reset(session_id: str):
        session = store.sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        session.reset()
        return Response(status_code=204)

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        session = store.sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        return {
            "id": session.id,
            "pg_id": store.session_pg.get(session_id),
            "history": [
                {
                    "text": h.text,
                    "question_type": h.question.qtype.value,
                    "selected_type": h.selected_type.value if h.selected_type else None,
                    "answer": h.answer,
                }
                for h in session.history
            ],
            "overlay": [modification_to_dict(m) for m in session.overlay],
        }

    @app.post("/sessions/{session_id}/overlay/remove")
    async def remove_overlay(session_id: str, body: dict):
        session = store.sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        index = body.get("index")
        if not isinstance(index, int) or isinstance(index, bool):
            return _error(400, "bad_request", "index is required")
        try:
            session.drop_overlay(index)
        except IndexError as e:
            return _error(422, "unprocessable", str(e))
        return {"overlay": [modification_to_dict(m) for m in session.overlay]}

    return app


app = create_app()
