"""HTTP surface over the engine; no business logic lives here.

Wire format is snake_case JSON; every error body is {code, message,
details}. Mutating routes are serialized per session; reads run against
the last published state.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..bootstrap import EngineContext
from ..errors import (
    AlreadyUndone,
    ApplyBlocked,
    DuplicateStage,
    EmptyMessage,
    GenieError,
    InvalidUndoTarget,
    NoRecommendationYet,
    NoStagedActions,
    StaleVersion,
    UnknownAction,
    UnknownConflict,
    UnknownNode,
    UnknownProposal,
)
from ..matcher.engine import Recommendation
from ..session.manager import Session

STATUS_BY_ERROR = {
    UnknownNode: 404,
    UnknownAction: 404,
    UnknownConflict: 404,
    UnknownProposal: 404,
    EmptyMessage: 422,
    DuplicateStage: 409,
    NoStagedActions: 409,
    ApplyBlocked: 409,
    StaleVersion: 409,
    NoRecommendationYet: 409,
    AlreadyUndone: 409,
    InvalidUndoTarget: 409,
}


class ChatBody(BaseModel):
    message: str


class InteractionBody(BaseModel):
    kind: str
    node_id: str


class ApplyBody(BaseModel):
    query_version: int | None = None


class UndoBody(BaseModel):
    action_id: int


class ConflictBody(BaseModel):
    pair_id: str
    winner_ref: str


class LearnedBody(BaseModel):
    proposal_id: str


class ClarificationBody(BaseModel):
    term: str
    choice: str


@dataclass
class SessionHandle:
    session: Session
    created_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    changed: threading.Condition = field(default_factory=threading.Condition)

    def notify(self) -> None:
        with self.changed:
            self.changed.notify_all()


class UnknownSession(GenieError):
    code = "unknown_session"

    def __init__(self, token: str):
        super().__init__(f"no session {token!r}")


def split_recommendation(rec: Recommendation | None):
    if rec is None:
        return None, None
    payload = rec.to_dict()
    subgraph = payload.pop("subgraph")
    return payload, subgraph


def create_app(context: EngineContext) -> FastAPI:
    app = FastAPI(title="healthgenie", version="0.1.0")
    # the UI is served statically from another origin
    from fastapi.middleware.cors import CORSMiddleware
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"], expose_headers=["x-detail-clamped"])
    handles: dict[str, SessionHandle] = {}
    registry_lock = threading.Lock()

    def handle_of(token: str) -> SessionHandle:
        handle = handles.get(token)
        if handle is None:
            raise UnknownSession(token)
        return handle

    @app.exception_handler(GenieError)
    async def genie_error_handler(request: Request, exc: GenieError):
        status = 404 if isinstance(exc, UnknownSession) else STATUS_BY_ERROR.get(type(exc), 400)
        body = exc.payload()
        body.setdefault("details", {})
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={
            "code": "malformed_body", "message": "request body does not match the contract",
            "details": {"errors": [str(e.get("msg", "")) for e in exc.errors()]},
        })

    @app.post("/sessions")
    def create_session():
        with registry_lock:
            session = context.new_session()
            handle = SessionHandle(session=session, created_at=time.time())
            handles[session.id] = handle
        return {"token": session.id, "created_at": handle.created_at,
                "snapshot_version": session.snapshot.version,
                "query_version": session.query_version}

    @app.post("/sessions/{token}/chat")
    def chat(token: str, body: ChatBody, request: Request, response: Response):
        handle = handle_of(token)
        with handle.lock:
            result = handle.session.route_turn(body.message)
            rec, subgraph = split_recommendation(result.recommendation)
            payload = result.to_dict()
            payload["recommendation"] = rec
            payload["subgraph"] = subgraph
            payload["query_version"] = handle.session.query_version
        handle.notify()
        # an accept-language header is accepted but only English is served
        response.headers["content-language"] = "en"
        return payload

    @app.post("/sessions/{token}/interactions")
    def stage(token: str, body: InteractionBody):
        handle = handle_of(token)
        with handle.lock:
            action = handle.session.stage_action(body.kind, body.node_id)
            return {
                "action": action.to_record(),
                "staged": [a.to_record() for a in handle.session.staged_actions()],
                "conflicts_preview": [c.to_dict() for c in handle.session.staged_conflicts()],
                "query_version": handle.session.query_version,
            }

    @app.post("/sessions/{token}/apply")
    def apply(token: str, body: ApplyBody | None = None):
        handle = handle_of(token)
        with handle.lock:
            session = handle.session
            if body is not None and body.query_version is not None \
                    and body.query_version != session.query_version:
                raise StaleVersion(body.query_version, session.query_version)
            profile, rec = session.apply()
            rec_payload, subgraph = split_recommendation(rec)
            response = {
                "recommendation": rec_payload,
                "subgraph_with_diff": subgraph,
                "profile": profile.comparable_state(),
                "learned_proposals": [p.to_dict() for p in session.learn_repetition()],
                "query_version": session.query_version,
            }
        handle.notify()
        return response

    @app.post("/sessions/{token}/undo")
    def undo(token: str, body: UndoBody):
        handle = handle_of(token)
        with handle.lock:
            profile, rec = handle.session.undo(body.action_id)
            rec_payload, subgraph = split_recommendation(rec)
            response = {
                "recommendation": rec_payload,
                "subgraph_with_diff": subgraph,
                "profile": profile.comparable_state(),
                "query_version": handle.session.query_version,
            }
        handle.notify()
        return response

    @app.get("/sessions/{token}/graph")
    def graph(token: str, response: Response, detail: int = 1):
        handle = handle_of(token)
        with handle.lock:
            session = handle.session
            if session.last_recommendation is None:
                raise NoRecommendationYet()
            max_detail = context.config.recommend.max_detail
            clamped = detail > max_detail or detail < 1
            level = max(1, min(detail, max_detail))
            view = context.matcher.review(session.last_recommendation,
                                          session.snapshot, level)
            if clamped:
                response.headers["x-detail-clamped"] = "true"
            return {"subgraph": view.to_dict(), "detail": level,
                    "query_version": session.query_version}

    @app.get("/sessions/{token}/suggested-queries")
    def suggested(token: str):
        handle = handle_of(token)
        with handle.lock:
            session = handle.session
            top_dish = None
            if session.last_recommendation and session.last_recommendation.results:
                top = session.last_recommendation.results[0].recipe
                top_dish = session.snapshot.node(top).label
            constraints = [c.describe() for c in
                           session.profile.active_constraints.filter_effective()]
            suggestions = context.gateway.generate_queries(
                top_dish, constraints, has_history=bool(session.actions))
            return {"suggestions": suggestions, "query_version": session.query_version}

    @app.get("/sessions/{token}/history")
    def history(token: str):
        handle = handle_of(token)
        with handle.lock:
            return {"actions": handle.session.records(),
                    "query_version": handle.session.query_version}

    @app.get("/sessions/{token}/updates")
    def updates(token: str, since: int = 0, timeout_ms: int = 10000):
        handle = handle_of(token)
        deadline = time.time() + min(timeout_ms, 60000) / 1000.0
        while True:
            current = handle.session.query_version
            if current > since:
                return {"changed": True, "query_version": current}
            remaining = deadline - time.time()
            if remaining <= 0:
                return {"changed": False, "query_version": current}
            with handle.changed:
                handle.changed.wait(timeout=min(remaining, 0.25))

    @app.post("/sessions/{token}/conflicts")
    def resolve_conflict(token: str, body: ConflictBody):
        handle = handle_of(token)
        with handle.lock:
            profile = handle.session.resolve_conflict(body.pair_id, body.winner_ref)
            return {"profile": profile.comparable_state(),
                    "query_version": handle.session.query_version}

    @app.post("/sessions/{token}/learned")
    def confirm_learned(token: str, body: LearnedBody):
        handle = handle_of(token)
        with handle.lock:
            profile = handle.session.confirm_learned(body.proposal_id)
            return {"profile": profile.comparable_state(),
                    "query_version": handle.session.query_version}

    @app.post("/sessions/{token}/clarifications")
    def answer_clarification(token: str, body: ClarificationBody):
        handle = handle_of(token)
        with handle.lock:
            profile = handle.session.answer_clarification(body.term, body.choice)
            return {"profile": profile.comparable_state(),
                    "query_version": handle.session.query_version}

    return app
