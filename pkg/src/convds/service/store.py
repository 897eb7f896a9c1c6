"""In-memory session registry with per-session locks and JSONL persistence."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from convds.dialogue.session import Session
from convds.engine import Engine
from convds.errors import UnknownSession


@dataclass
class StoredSession:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, engine: Engine, data_dir: str | Path | None = None):
        self._engine = engine
        self._sessions: dict[str, StoredSession] = {}
        self._registry_lock = threading.Lock()
        self._data_dir = Path(data_dir) if data_dir else None
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)

    def _sink_for(self, session_id: str):
        if self._data_dir is None:
            return None
        path = self._data_dir / f"{session_id}.jsonl"

        def sink(record: dict) -> None:
            # append-per-record keeps the log crash-consistent
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")

        return sink

    def create(self) -> Session:
        session = self._engine.new_session()
        sink = self._sink_for(session.session_id)
        if sink is not None:
            for record in session.events.records:
                sink(record)  # flush the creation record written before attach
            session.events.sink = sink
        with self._registry_lock:
            self._sessions[session.session_id] = StoredSession(session)
        return session

    def get(self, session_id: str) -> StoredSession:
        with self._registry_lock:
            stored = self._sessions.get(session_id)
        if stored is None:
            raise UnknownSession(session_id)
        return stored

    def log_path(self, session_id: str) -> Path | None:
        if self._data_dir is None:
            return None
        return self._data_dir / f"{session_id}.jsonl"
