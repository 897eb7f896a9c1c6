"""HTTP facade over the engine: sessions, dataset upload, chat, results.

One lock per session serializes its turns; distinct sessions run in parallel.
Every mutating endpoint appends its events to the session log before replying.
"""

from __future__ import annotations

from fastapi import Depends, FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from convds.config import Settings, load_settings
from convds.engine import Engine, build_backend, build_gateway
from convds.errors import (
    DatasetMissing,
    EngineError,
    StateConflict,
    TransportFailure,
    UnknownSession,
    ValidationFailure,
)
from convds.service.store import SessionStore


class MessageIn(BaseModel):
    text: str


def _suggestions_payload(session) -> list[dict]:
    if session.suggestions is None:
        return []
    return [
        {
            "task": s.task.value,
            "rationale": s.rationale,
            "example_formulation": s.example_formulation,
        }
        for s in session.suggestions.tasks
    ]


def _summary_payload(session) -> dict | None:
    summary = session.dataset_summary
    if summary is None:
        return None
    return {
        "summary": summary.summary,
        "columns": [{"name": c.name, "description": c.description} for c in summary.columns],
        "row": summary.row,
        "trend": summary.trend,
    }


def create_app(
    settings: Settings | None = None,
    engine: Engine | None = None,
    store: SessionStore | None = None,
) -> FastAPI:
    settings = settings or load_settings()
    if engine is None:
        engine = Engine(
            build_gateway(settings), backend=build_backend(settings), seed=settings.seed
        )
    if store is None:
        store = SessionStore(engine, data_dir=settings.data_dir)

    app = FastAPI(title="convds", version="0.1.0")
    app.state.engine = engine
    app.state.store = store

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[settings.cors_origin] if settings.cors_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def check_auth(request: Request) -> None:
        if not settings.auth_token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {settings.auth_token}":
            raise _AuthError()

    class _AuthError(Exception):
        pass

    @app.exception_handler(_AuthError)
    async def _auth_error(request: Request, exc: _AuthError) -> Response:
        return JSONResponse({"error": "unauthorized"}, status_code=401)

    @app.exception_handler(UnknownSession)
    async def _unknown_session(request: Request, exc: UnknownSession) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=404)

    @app.exception_handler(DatasetMissing)
    async def _dataset_missing(request: Request, exc: DatasetMissing) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(StateConflict)
    async def _state_conflict(request: Request, exc: StateConflict) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=409)

    @app.exception_handler(TransportFailure)
    async def _transport(request: Request, exc: TransportFailure) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=502)

    @app.exception_handler(ValidationFailure)
    async def _validation(request: Request, exc: ValidationFailure) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=422)

    @app.exception_handler(EngineError)
    async def _engine_error(request: Request, exc: EngineError) -> Response:
        return JSONResponse({"error": str(exc)}, status_code=502)

    @app.post("/v1/sessions", dependencies=[Depends(check_auth)])
    def create_session() -> dict:
        session = store.create()
        return {"session_id": session.session_id, "state": session.state.value}

    @app.post("/v1/sessions/{session_id}/dataset", dependencies=[Depends(check_auth)])
    async def upload_dataset(session_id: str, request: Request, name: str = "dataset") -> dict:
        raw = await request.body()
        stored = store.get(session_id)
        with stored.lock:
            reply = engine.load_dataset(stored.session, raw, name=name)
            return {
                "reply": reply,
                "summary": _summary_payload(stored.session),
                "suggestions": _suggestions_payload(stored.session),
                "state": stored.session.state.value,
            }

    @app.post("/v1/sessions/{session_id}/messages", dependencies=[Depends(check_auth)])
    def post_message(session_id: str, body: MessageIn) -> dict:
        stored = store.get(session_id)
        with stored.lock:
            reply = engine.handle_message(stored.session, body.text)
            return {
                "reply": reply,
                "state": stored.session.state.value,
                "petel_progress": engine.petel_progress(stored.session),
            }

    @app.get("/v1/sessions/{session_id}", dependencies=[Depends(check_auth)])
    def get_state(session_id: str) -> dict:
        stored = store.get(session_id)
        with stored.lock:
            return engine.session_record(stored.session)

    @app.get("/v1/sessions/{session_id}/results", dependencies=[Depends(check_auth)])
    def get_results(session_id: str) -> dict:
        stored = store.get(session_id)
        with stored.lock:
            return engine.results_payload(stored.session)

    return app
