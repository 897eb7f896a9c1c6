"""High-level facade tying the dialogue loop, dataset intake, and training
backends together for the service, the CLI, and tests."""

from __future__ import annotations

from typing import Callable

from convds.config import Settings
from convds.dialogue.session import EventLog, Session, manage_turn, snapshot_of
from convds.dialogue.states import DialogueState
from convds.errors import StateConflict, ValidationFailure
from convds.gateway import Gateway, HttpProvider, ScriptedProvider
from convds.petel.expression import slot_is_filled, to_dict
from convds.pipeline.backends import BuiltinBaselineBackend, HttpBackend
from convds.results import ResultSummary
from convds.tabular.dataset import load_table
from convds.tabular.miniature import miniaturize
from convds.tabular.suggest import suggest_tasks
from convds.tabular.summarize import summarize_dataset


def build_gateway(settings: Settings) -> Gateway:
    if settings.provider == "scripted":
        if not settings.script_path:
            raise ValidationFailure("scripted provider requires a transcript path")
        provider = ScriptedProvider.from_jsonl(
            settings.script_path, strict_order=settings.script_strict
        )
    elif settings.provider == "http":
        if not settings.provider_url:
            raise ValidationFailure("http provider requires CONVDS_PROVIDER_URL")
        provider = HttpProvider(
            settings.provider_url,
            api_key=settings.provider_api_key,
            model=settings.provider_model,
        )
    else:
        raise ValidationFailure(f"unknown provider kind {settings.provider!r}")
    return Gateway(provider, level_override=settings.level_override)


def build_backend(settings: Settings):
    if settings.backend == "builtin":
        return BuiltinBaselineBackend()
    return HttpBackend(settings.backend)


def welcome_reply(session: Session) -> str:
    summary = session.dataset_summary
    suggestions = session.suggestions
    assert summary is not None and suggestions is not None
    lines = [
        "Hello, I am your data science assistant. I have processed the dataset"
        " you provided. Here is a summary:",
        summary.summary,
        "I propose the following ML tasks for this dataset:",
    ]
    for i, s in enumerate(suggestions.tasks, start=1):
        lines.append(f"{i}. {s.task.value}: {s.rationale.strip()}")
    lines.append("Which task would you like to pursue?")
    return "\n".join(lines)


class Engine:
    """One engine per process; sessions are independent and self-contained."""

    def __init__(self, gateway: Gateway, backend=None, seed: int = 0):
        self.gateway = gateway
        self.backend = backend or BuiltinBaselineBackend()
        self.seed = seed

    def new_session(self, sink: Callable[[dict], None] | None = None) -> Session:
        session = Session(events=EventLog(sink))
        session.events.append(
            {
                "kind": "session_created",
                "session_id": session.session_id,
                "created_at": session.created_at,
            }
        )
        return session

    def load_dataset(self, session: Session, raw: bytes | str, name: str = "dataset") -> str:
        """Ingest a CSV body; returns the composed welcome reply."""
        if session.state is not DialogueState.DATA_VISUALIZATION or session.petel is not None:
            raise StateConflict("the dataset can only be replaced before task formulation")
        gw = self.gateway.recorded(session.events.append)
        dataset = load_table(raw, name=name)
        mini = miniaturize(dataset, seed=self.seed)
        summary = summarize_dataset(mini, gw)
        suggestions = suggest_tasks(summary, gw)

        session.dataset = dataset
        session.mini = mini
        session.dataset_summary = summary
        session.suggestions = suggestions
        reply = welcome_reply(session)
        session.events.append(
            {
                "kind": "dataset_loaded",
                "name": dataset.name,
                "rows": dataset.row_count,
                "columns": list(dataset.column_names),
                "summary": summary.summary,
                "trend": summary.trend,
                "tasks": [s.task.value for s in suggestions.tasks],
            }
        )
        session.events.append({"kind": "utterance", "role": "assistant", "text": reply})
        return reply

    def handle_message(self, session: Session, text: str) -> str:
        return manage_turn(session, text, self.gateway, backend=self.backend, seed=self.seed)

    def petel_progress(self, session: Session) -> dict:
        """Fillable-slot checklist: every slot is either filled or missing."""
        petel = session.petel
        if petel is None:
            return {"filled": [], "missing": []}
        filled, missing = [], []
        for spec in petel.schema.fillable_slots:
            value = petel.values.get(spec.name)
            (filled if slot_is_filled(spec, value) else missing).append(spec.name)
        return {"filled": filled, "missing": missing}

    def session_record(self, session: Session) -> dict:
        return {
            "session_id": session.session_id,
            "created_at": session.created_at,
            "state": session.state.value,
            "dataset": session.dataset.name if session.dataset else None,
            "petel": to_dict(session.petel) if session.petel else None,
            "last_summary": session.context.summary,
            "turn_count": session.context.turn_count,
            "snapshot": snapshot_of(session),
        }

    def results_payload(self, session: Session) -> dict:
        summary = session.results
        if summary is None:
            raise StateConflict("no results yet: the task has not been executed")
        return results_as_dict(summary)


def results_as_dict(summary: ResultSummary) -> dict:
    return {
        "recommended": summary.recommended,
        "rationale": summary.rationale,
        "ranking": list(summary.ranking),
        "ranked_by": summary.ranked_by,
        "methods": [
            {"method": row.method, "status": row.status, "metrics": dict(row.metrics)}
            for row in summary.rows
        ],
    }
