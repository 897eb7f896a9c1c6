"""Session state and the per-turn orchestration loop.

A turn is atomic: every mutation is computed on the side and committed only
after the whole pipeline has succeeded, so a failed turn leaves state, task
expression, and context exactly as they were (the event log still records
what happened).
"""

from __future__ import annotations

import re
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable

from convds.errors import (
    DatasetMissing,
    EngineError,
    TransportFailure,
    ValidationFailure,
)
from convds.dialogue.detector import IntentStateDecision, detect_intent_state
from convds.dialogue.states import DialogueState, Intent, intent_display
from convds.dialogue.summarizer import summarize_dialogue
from convds.gateway import AgentId
from convds.petel.agents import describe, feed, seek, select_task
from convds.petel.expression import (
    Petel,
    blank_petel,
    is_complete,
    mark_optionals_skipped,
    next_unfilled_slot,
    real_filters,
    slot_is_filled,
    to_dict,
)
from convds.petel.schema import MlTask
from convds.pipeline.attributes import petel_to_attributes
from convds.pipeline.backends import BuiltinBaselineBackend, TrainResponse, dispatch
from convds.pipeline.filters import apply_filters
from convds.pipeline.prep import prep_data
from convds.pipeline.request import build_train_request
from convds.results import ResultSummary, summarize_results, template_results
from convds.tabular.dataset import Dataset
from convds.tabular.miniature import MiniDataset
from convds.tabular.suggest import TaskSuggestion
from convds.tabular.summarize import DatasetSummary

CONFIRMATION_ASK = "Does this formulation look right? Say 'go ahead' to run it."

_DECLINE_PATTERN = re.compile(
    r"\b(skip|no thanks|nothing else|none|no more|that'?s all|defaults?|proceed|go ahead)\b",
    re.IGNORECASE,
)


class EventLog:
    """Append-only event record; every append is timestamped and forwarded
    to the sink (the JSONL persistence hook) before the call returns."""

    def __init__(self, sink: Callable[[dict], None] | None = None, clock=time.time):
        self.records: list[dict] = []
        self.sink = sink
        self._clock = clock

    def append(self, event: dict) -> None:
        record = {"ts": self._clock(), **event}
        self.records.append(record)
        if self.sink is not None:
            self.sink(record)


@dataclass
class ConversationContext:
    summary: str = ""
    turn_count: int = 0


@dataclass
class Session:
    session_id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    state: DialogueState = DialogueState.DATA_VISUALIZATION
    context: ConversationContext = field(default_factory=ConversationContext)
    history: list[tuple[str, str]] = field(default_factory=list)
    dataset: Dataset | None = None
    mini: MiniDataset | None = None
    dataset_summary: DatasetSummary | None = None
    suggestions: TaskSuggestion | None = None
    selected_task: MlTask | None = None
    petel: Petel | None = None
    awaiting_confirmation: bool = False
    results: ResultSummary | None = None
    train_response: TrainResponse | None = None
    events: EventLog = field(default_factory=EventLog)
    created_at: float = field(default_factory=time.time)


def snapshot_of(session: Session, reply: str = "") -> dict:
    return {
        "state": session.state.value,
        "selected_task": session.selected_task.value if session.selected_task else None,
        "awaiting_confirmation": session.awaiting_confirmation,
        "petel": to_dict(session.petel) if session.petel else None,
        "context": {
            "summary": session.context.summary,
            "turn_count": session.context.turn_count,
        },
        "reply": reply,
        "results": {
            "recommended": session.results.recommended,
            "ranking": list(session.results.ranking),
        }
        if session.results
        else None,
    }


@dataclass
class _TurnOutcome:
    reply: str
    next_state: DialogueState
    petel: Petel | None
    selected_task: MlTask | None
    awaiting_confirmation: bool
    results: ResultSummary | None
    train_response: TrainResponse | None
    new_summary: str = ""


def _is_decline(utterance: str) -> bool:
    return bool(_DECLINE_PATTERN.search(utterance))


def _mentions(text: str, token: str) -> bool:
    squash = lambda s: re.sub(r"[_\s]+", " ", s.lower())
    return squash(token) in squash(text)


def _route_data_visualization(session: Session, decision: IntentStateDecision) -> str:
    summary = session.dataset_summary
    if summary is None:
        raise DatasetMissing("no dataset has been uploaded yet")
    if decision.intent is Intent.GET_DATASET_TREND:
        return summary.trend
    parts = [summary.summary]
    if summary.row:
        parts.append(f"Sample row: {summary.row}")
    if session.suggestions:
        tasks = ", ".join(s.task.value for s in session.suggestions.tasks)
        parts.append(f"Suitable ML tasks for this dataset: {tasks}.")
    return " ".join(parts)


def _route_task_formulation(
    session: Session, utterance: str, gw
) -> tuple[str, str, Petel, bool]:
    if session.petel is not None:
        petel = session.petel
    elif session.selected_task is not None:
        petel = blank_petel(session.selected_task)
    else:
        raise ValidationFailure("no ML task has been selected yet")

    required_done, _ = is_complete(petel)
    has_open_optionals = any(
        not slot_is_filled(spec, petel.values.get(spec.name))
        for spec in petel.schema.optional_slots
    )
    if required_done and has_open_optionals and _is_decline(utterance):
        petel = mark_optionals_skipped(petel)
    else:
        petel = feed(petel, utterance, gw)

    slot = next_unfilled_slot(petel)
    if slot is not None:
        summary_text = session.dataset_summary.summary if session.dataset_summary else ""
        question = seek(petel, session.context.summary, gw, dataset_summary=summary_text)
        return "seeker", question, petel, False
    description = describe(petel, gw)
    return "descriptor", description, petel, True


def _route_model_training(
    session: Session, petel: Petel, backend, seed: int
) -> tuple[str, ResultSummary, TrainResponse]:
    dataset = session.dataset
    if dataset is None:
        raise DatasetMissing("no dataset has been uploaded yet")
    filtered = apply_filters(dataset, real_filters(petel))
    plan = petel_to_attributes(petel, filtered)
    task_kind = "regression" if petel.problem_type is MlTask.REGRESSION else "classification"
    matrix = prep_data(filtered, plan, task=task_kind)
    request = build_train_request(petel, matrix, seed=seed)
    response = dispatch(request, backend)
    summary = summarize_results(response, petel)
    return template_results(summary), summary, response


def _run_turn(session: Session, utterance: str, gw, backend, seed: int) -> _TurnOutcome:
    decision = detect_intent_state(session.context.summary, session.state, utterance, gw)
    next_state = decision.next_state

    petel = session.petel
    selected = session.selected_task
    awaiting = session.awaiting_confirmation
    results = session.results
    train_response = session.train_response

    # Training is gated on a complete expression that the user has confirmed;
    # a premature transition degrades to another formulation turn.
    if (
        next_state is DialogueState.MODEL_TRAINING
        and session.state is not DialogueState.MODEL_TRAINING
    ):
        complete = petel is not None and is_complete(petel)[0]
        if not (complete and session.awaiting_confirmation):
            next_state = session.state

    if decision.intent is Intent.CHITCHAT:
        microprocess, mp_resp = "none", ""
    elif session.dataset is None:
        raise DatasetMissing("no dataset has been uploaded yet")
    elif next_state is DialogueState.DATA_VISUALIZATION:
        microprocess = "dataset_summarizer"
        mp_resp = _route_data_visualization(session, decision)
    elif next_state is DialogueState.TASK_SELECTION:
        task, reason = select_task(session.context.summary, utterance, gw)
        selected = task
        microprocess = "task_selector"
        mp_resp = f"Selected ML task: {task.value}. {reason}"
    elif next_state is DialogueState.TASK_FORMULATION:
        microprocess, mp_resp, petel, awaiting = _route_task_formulation(session, utterance, gw)
    else:  # MODEL_TRAINING
        if session.state is DialogueState.MODEL_TRAINING and session.results is not None:
            microprocess = "result_summarizer"
            mp_resp = template_results(session.results)
        else:
            microprocess = "result_summarizer"
            mp_resp, results, train_response = _route_model_training(
                session, petel, backend, seed
            )
            awaiting = False

    cm_reply = gw.call(
        AgentId.CONVERSATION_MANAGER,
        {
            "context": session.context.summary,
            "state": next_state.value,
            "input": utterance,
            "intent": intent_display(decision.intent),
            "microprocess": microprocess,
            "mp_resp": mp_resp,
        },
    )
    reply = cm_reply.strip() or mp_resp or "Could you tell me more about what you would like to do?"

    if microprocess == "result_summarizer" and results is not None:
        # The compose pass doubles as the polish pass; it must keep the
        # recommendation intact.
        if not _mentions(reply, results.recommended):
            reply = mp_resp
    if microprocess == "descriptor":
        reply = f"{reply}\n\n{CONFIRMATION_ASK}"

    new_summary = summarize_dialogue(session.history, utterance, reply, gw)

    return _TurnOutcome(
        reply=reply,
        next_state=next_state,
        petel=petel,
        selected_task=selected,
        awaiting_confirmation=awaiting,
        results=results,
        train_response=train_response,
        new_summary=new_summary,
    )


def manage_turn(
    session: Session,
    utterance: str,
    gateway,
    backend=None,
    seed: int = 0,
) -> str:
    """One full dialogue turn; returns the user-facing reply."""
    if not utterance or not utterance.strip():
        raise ValidationFailure("message must be non-empty")
    events = session.events
    gw = gateway.recorded(events.append)
    events.append({"kind": "utterance", "role": "user", "text": utterance})
    prior_state = session.state

    try:
        outcome = _run_turn(session, utterance, gw, backend or BuiltinBaselineBackend(), seed)
    except (DatasetMissing, TransportFailure) as exc:
        events.append({"kind": "error", "error": type(exc).__name__, "detail": str(exc)})
        raise
    except EngineError as exc:
        events.append({"kind": "error", "error": type(exc).__name__, "detail": str(exc)})
        reply = (
            f"Sorry, I ran into a problem while working on that: {exc}. "
            "The task is unchanged; you can adjust it or try again."
        )
        events.append({"kind": "utterance", "role": "assistant", "text": reply})
        return reply

    session.state = outcome.next_state
    session.petel = outcome.petel
    session.selected_task = outcome.selected_task
    session.awaiting_confirmation = outcome.awaiting_confirmation
    session.results = outcome.results
    session.train_response = outcome.train_response
    session.history.append(("user", utterance))
    session.history.append(("assistant", outcome.reply))
    session.context = ConversationContext(
        summary=outcome.new_summary,
        turn_count=session.context.turn_count + 1,
    )
    events.append({"kind": "utterance", "role": "assistant", "text": outcome.reply})
    events.append(
        {
            "kind": "state_change",
            "from": prior_state.value,
            "to": session.state.value,
            "turn": session.context.turn_count,
            "snapshot": snapshot_of(session, reply=outcome.reply),
        }
    )
    return outcome.reply
