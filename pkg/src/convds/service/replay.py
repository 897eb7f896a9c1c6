"""Offline reconstruction of a session from its append-only event log.

Replay is the persistence test: any prefix of a valid log must replay to a
valid session, and every state step must obey the transition whitelist.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from convds.dialogue.states import DialogueState, allowed_next, normalize_state
from convds.errors import InvalidTransition, ReplayCorrupt, ValidationFailure


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    created_at: float
    state: str
    dataset: str | None
    petel: dict | None
    last_summary: str
    trajectory: tuple[str, ...]
    turn_count: int


def replay_events(events: Iterable[dict]) -> SessionRecord:
    session_id: str | None = None
    created_at = 0.0
    dataset: str | None = None
    petel: dict | None = None
    last_summary = ""
    turn_count = 0
    current = DialogueState.DATA_VISUALIZATION
    trajectory: list[str] = [current.value]

    for i, event in enumerate(events):
        kind = event.get("kind")
        if kind == "session_created":
            if session_id is not None:
                raise ReplayCorrupt(f"record {i}: duplicate session_created")
            session_id = str(event.get("session_id", ""))
            created_at = float(event.get("created_at", 0.0))
        elif kind == "dataset_loaded":
            dataset = event.get("name")
        elif kind == "state_change":
            try:
                src = normalize_state(str(event["from"]))
                dst = normalize_state(str(event["to"]))
            except (KeyError, ValidationFailure) as exc:
                raise ReplayCorrupt(f"record {i}: bad state_change: {exc}") from exc
            if src is not current:
                raise ReplayCorrupt(
                    f"record {i}: state_change starts at {src.value}, "
                    f"session was at {current.value}"
                )
            if dst not in allowed_next(src):
                raise InvalidTransition(src.value, dst.value)
            current = dst
            if trajectory[-1] != dst.value:
                trajectory.append(dst.value)
            snapshot = event.get("snapshot") or {}
            petel = snapshot.get("petel", petel)
            context = snapshot.get("context") or {}
            last_summary = context.get("summary", last_summary)
            turn_count = int(event.get("turn", turn_count))
    if session_id is None:
        raise ReplayCorrupt("log has no session_created record")
    return SessionRecord(
        session_id=session_id,
        created_at=created_at,
        state=current.value,
        dataset=dataset,
        petel=petel,
        last_summary=last_summary,
        trajectory=tuple(trajectory),
        turn_count=turn_count,
    )


def replay_log(path: str | Path) -> SessionRecord:
    events = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ReplayCorrupt(f"line {lineno}: not valid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise ReplayCorrupt(f"line {lineno}: expected an object")
        events.append(record)
    return replay_events(events)
