"""HTTP surface and the file-backed session store.

Sessions persist as append-only JSON Lines event logs, one file per session.
Because the engine is deterministic, replaying the logged user turns through
a fresh engine reconstructs the exact session, which is how the store
recovers after a restart. Every message response embeds the full map so a
client can render without any push channel.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .dialogue import DialogueEngine, DialogueSession, EngineConfig, TurnResult
from .hypotheses import hypotheses_for_edges, to_markdown


class ApiError(Exception):
    """Error with an HTTP status, a machine code, and a human message."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class StorageError(ApiError):
    def __init__(self, message: str):
        super().__init__(500, "storage_error", message)


def _unknown_session(session_id: str) -> ApiError:
    return ApiError(404, "unknown_session", f"no session with id {session_id!r}")


class _Record:
    def __init__(self, session: DialogueSession):
        self.session = session
        self.lock = threading.Lock()


class SessionStore:
    """Keeps live sessions in memory and their event logs on disk."""

    def __init__(self, data_dir: str | Path, engine: Optional[DialogueEngine] = None):
        self.data_dir = Path(data_dir)
        self.engine = engine or DialogueEngine()
        self._records: dict[str, _Record] = {}
        self._registry_lock = threading.Lock()
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create data directory: {exc}") from exc

    def _log_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.jsonl"

    def _append(self, session_id: str, event: dict[str, Any]) -> None:
        try:
            with self._log_path(session_id).open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(event, separators=(",", ":")) + "\n")
        except OSError as exc:
            raise StorageError(f"cannot append to session log: {exc}") from exc

    def create(self, config: Optional[EngineConfig] = None) -> DialogueSession:
        session = self.engine.new_session(config=config)
        self._append(session.id, {
            "type": "created",
            "session_id": session.id,
            "config": session.config.to_payload(),
            "greeting": session.greeting,
            "state": session.state.kind.value,
        })
        with self._registry_lock:
            self._records[session.id] = _Record(session)
        return session

    def get(self, session_id: str) -> _Record:
        with self._registry_lock:
            record = self._records.get(session_id)
        if record is not None:
            return record
        session = self._load(session_id)
        record = _Record(session)
        with self._registry_lock:
            self._records.setdefault(session_id, record)
            return self._records[session_id]

    def _load(self, session_id: str) -> DialogueSession:
        path = self._log_path(session_id)
        if not path.is_file():
            raise _unknown_session(session_id)
        session: Optional[DialogueSession] = None
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise StorageError(f"cannot read session log: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StorageError(f"{path.name}:{lineno}: corrupt event: {exc.msg}") from exc
            if event.get("type") == "created":
                session = self.engine.new_session(
                    config=EngineConfig.from_payload(event.get("config", {})),
                    session_id=event["session_id"],
                )
            elif event.get("type") == "turn":
                if session is None:
                    raise StorageError(f"{path.name}:{lineno}: turn before created event")
                self.engine.handle(session, event["user"])
        if session is None:
            raise StorageError(f"{path.name}: no created event")
        return session

    def record_turn(self, session: DialogueSession, user_text: str,
                    result: TurnResult) -> None:
        self._append(session.id, {
            "type": "turn",
            "user": user_text,
            "replies": result.replies,
            "state": result.state.kind.value,
            "done": result.done,
        })


def turn_payload(result: TurnResult) -> dict[str, Any]:
    return {
        "replies": result.replies,
        "state": result.state.kind.value,
        "map": result.map.to_payload(),
        "hypotheses": ([h.to_payload() for h in result.hypotheses]
                       if result.hypotheses is not None else None),
        "done": result.done,
    }


def session_payload(session: DialogueSession) -> dict[str, Any]:
    return {
        "session_id": session.id,
        "state": session.state.kind.value,
        "done": session.done,
        "transcript": [
            {"speaker": entry.speaker, "text": entry.text, "turn": entry.turn}
            for entry in session.transcript
        ],
    }


class CreateSessionRequest(BaseModel):
    max_refinement_rounds: Optional[int] = None
    clarification_threshold: Optional[float] = None


class MessageRequest(BaseModel):
    text: str


EXPORT_FORMATS = ("json", "dot", "markdown")


def export_session(session: DialogueSession, format: str) -> str:
    if format == "json":
        return session.map.to_json()
    if format == "dot":
        return session.map.to_dot()
    if format == "markdown":
        return to_markdown(hypotheses_for_edges(session.map))
    raise ApiError(400, "unknown_format",
                   f"format must be one of {', '.join(EXPORT_FORMATS)}")


def create_app(store: SessionStore, ui_dir: Optional[str | Path] = None) -> FastAPI:
    app = FastAPI(title="mentorbot", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"code": "bad_request", "message": str(exc.errors())})

    @app.post("/api/sessions", status_code=201)
    def create_session(request: Optional[CreateSessionRequest] = None):
        request = request or CreateSessionRequest()
        defaults = EngineConfig()
        config = EngineConfig(
            max_refinement_rounds=(request.max_refinement_rounds
                                   if request.max_refinement_rounds is not None
                                   else defaults.max_refinement_rounds),
            clarification_threshold=(request.clarification_threshold
                                     if request.clarification_threshold is not None
                                     else defaults.clarification_threshold),
        )
        session = store.create(config)
        return {
            "session_id": session.id,
            "greeting": session.greeting,
            "state": session.state.kind.value,
        }

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, message: MessageRequest):
        record = store.get(session_id)
        if not record.lock.acquire(blocking=False):
            raise ApiError(409, "turn_in_flight",
                           "another turn is being processed for this session")
        try:
            if record.session.done:
                raise ApiError(410, "session_done", "this interview already finished")
            if not message.text.strip():
                raise ApiError(400, "empty_text", "text must not be empty")
            result = store.engine.handle(record.session, message.text)
            store.record_turn(record.session, message.text, result)
            return turn_payload(result)
        finally:
            record.lock.release()

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return session_payload(store.get(session_id).session)

    @app.get("/api/sessions/{session_id}/map")
    def get_map(session_id: str):
        return store.get(session_id).session.map.to_payload()

    @app.get("/api/sessions/{session_id}/hypotheses")
    def get_hypotheses(session_id: str):
        session = store.get(session_id).session
        return [h.to_payload() for h in hypotheses_for_edges(session.map)]

    @app.get("/api/sessions/{session_id}/export")
    def get_export(session_id: str, format: str = "json"):
        session = store.get(session_id).session
        text = export_session(session, format)
        media = "application/json" if format == "json" else "text/plain"
        return PlainTextResponse(text, media_type=media)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
