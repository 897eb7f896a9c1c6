"""Provider-backed task selection, slot seeking/feeding, and description."""

from __future__ import annotations

import re

from convds.errors import (
    EngineError,
    InvalidTask,
    JsonParseError,
    NoJsonFound,
    TransportFailure,
    TypeMismatch,
    UnknownSlot,
)
from convds.gateway import AgentId, extract_json
from convds.petel.expression import (
    SKIPPED,
    Petel,
    is_complete,
    next_unfilled_slot,
    parse_petel,
    serialize_petel,
    slot_is_filled,
)
from convds.petel.schema import MlTask, parse_ml_task


def select_task(context: str, utterance: str, gateway) -> tuple[MlTask, str]:
    """Pick the ML task for the user's goal; one corrective retry."""
    if not utterance or not utterance.strip():
        raise ValueError("utterance must be non-empty")
    bindings = {"context": context or "", "input": utterance}

    def attempt(reply: str) -> tuple[MlTask, str] | None:
        try:
            obj = extract_json(reply)
            task = parse_ml_task(obj["model"])
        except (NoJsonFound, JsonParseError, InvalidTask, KeyError, TypeError):
            return None
        return task, str(obj.get("reason", ""))

    reply = gateway.call(AgentId.TASK_SELECTOR, bindings)
    parsed = attempt(reply)
    if parsed is not None:
        return parsed
    suffix = (
        "The previous response was not usable. Respond with exactly one JSON object "
        '{"model": "...", "reason": "..."} where model is one of: classification, '
        "regression, clustering, dimensionality reduction, anomaly detection, time series."
    )
    reply = gateway.call(AgentId.TASK_SELECTOR, bindings, directive_suffix=suffix)
    parsed = attempt(reply)
    if parsed is None:
        raise InvalidTask(f"task selector returned no usable task: {reply[:120]!r}")
    return parsed


def _fallback_question(petel: Petel, slot: str) -> str:
    spec = petel.schema.slot(slot)
    return f"What value should be used for {slot}? ({spec.description})"


def _optional_offer(petel: Petel) -> tuple[str, str]:
    remaining = [
        spec.name
        for spec in petel.schema.optional_slots
        if not slot_is_filled(spec, petel.values.get(spec.name))
    ]
    names = ", ".join(remaining)
    suffix = (
        "All required slots are filled. In one question, offer the remaining optional "
        f"slots - {names} - and tell the user they can answer any of them or say 'skip' "
        "to leave the rest unset."
    )
    fallback = (
        f"The required details are in place. Optional settings remain: {names}. "
        "Provide any of them, or say 'skip' to leave them out."
    )
    return suffix, fallback


def seek(petel: Petel, context: str, gateway, dataset_summary: str = "") -> str:
    """One clear question for the next unfilled slot.

    In the optional phase (required slots all filled) the question offers the
    remaining optional slots together, with an explicit skip option.
    """
    slot = next_unfilled_slot(petel)
    if slot is None:
        raise ValueError("nothing left to seek: the expression is complete")
    bindings = {
        "petel": serialize_petel(petel),
        "context": context or "",
        "dataset_summary": dataset_summary or "",
    }
    spec = petel.schema.slot(slot)
    if spec.required:
        suffix = ""
        fallback = _fallback_question(petel, slot)
    else:
        suffix, fallback = _optional_offer(petel)
    reply = gateway.call(AgentId.SEEKER, bindings, directive_suffix=suffix)
    return reply.strip() if reply.strip() else fallback


def _diff_violations(old: Petel, new: Petel) -> list[str]:
    problems = []
    if new.problem_type is not old.problem_type:
        problems.append(f"problem_type changed to {new.problem_type.value}")
    for spec in old.schema.fillable_slots:
        before = old.values.get(spec.name)
        after = new.values.get(spec.name)
        if slot_is_filled(spec, before) and not slot_is_filled(spec, after):
            problems.append(f"slot {spec.name} was cleared")
    return problems


def feed(petel: Petel, utterance: str, gateway) -> Petel:
    """Fold the utterance into the expression; invalid updates degrade to a no-op.

    The provider returns a whole object which is diffed against the input:
    the task type must not change and no filled slot may be cleared. One
    corrective retry, then the input expression is returned unchanged.
    """
    if not utterance or not utterance.strip():
        raise ValueError("utterance must be non-empty")
    bindings = {"input": utterance, "petel": serialize_petel(petel)}

    def attempt(reply: str) -> tuple[Petel | None, str]:
        try:
            candidate = parse_petel(reply, expected_task=petel.problem_type)
        except (NoJsonFound, JsonParseError, UnknownSlot, TypeMismatch, InvalidTask) as exc:
            return None, str(exc)
        problems = _diff_violations(petel, candidate)
        if problems:
            return None, "; ".join(problems)
        return candidate, ""

    candidate, problem = attempt(gateway.call(AgentId.FEEDER, bindings))
    if candidate is not None:
        return candidate
    suffix = (
        f"The previous response was rejected ({problem}). Return the full JSON object "
        "again: keep problem_type and every already-filled slot exactly as given, and "
        "change only the slot supported by the new information."
    )
    candidate, _ = attempt(gateway.call(AgentId.FEEDER, bindings, directive_suffix=suffix))
    return candidate if candidate is not None else petel


def _mentions(text: str, token: str) -> bool:
    """Case-insensitive containment, treating spaces and underscores alike."""
    squash = lambda s: re.sub(r"[_\s]+", " ", s.lower())
    return squash(str(token)) in squash(text)


def _filled_slot_lines(petel: Petel) -> list[str]:
    lines = []
    for spec in petel.schema.fillable_slots:
        value = petel.values.get(spec.name)
        if not slot_is_filled(spec, value) or value == SKIPPED:
            continue
        if spec.kind == "filter_list":
            parts = [
                f"{e['column']} {e['condition']} {e['value']}"
                for e in value
                if e.get("column") is not None
            ]
            if parts:
                lines.append(f"- data_filters: {'; '.join(parts)}")
        elif isinstance(value, list):
            lines.append(f"- {spec.name}: {', '.join(str(v) for v in value)}")
        else:
            lines.append(f"- {spec.name}: {value}")
    return lines


def template_description(petel: Petel) -> str:
    header = f"Here is the {petel.problem_type.value} task as currently formulated:"
    return "\n".join([header, *_filled_slot_lines(petel)])


def describe(petel: Petel, gateway) -> str:
    """Natural-language rendering of a complete expression.

    The provider reply must mention the problem type and the target variable;
    otherwise a deterministic template enumerating the filled slots is used.
    """
    complete, missing = is_complete(petel)
    if not complete:
        raise ValueError(f"cannot describe an incomplete expression (missing {missing})")
    try:
        reply = gateway.call(AgentId.DESCRIPTOR, {"petel": serialize_petel(petel)})
    except TransportFailure:
        raise
    except EngineError:
        return template_description(petel)

    text = reply.strip()
    if not text or not _mentions(text, petel.problem_type.value):
        return template_description(petel)
    target = petel.values.get("target_variable")
    targets = target if isinstance(target, list) else [target] if target else []
    if targets and not all(_mentions(text, t) for t in targets):
        return template_description(petel)
    return text
