"""Intent/state detection with whitelist enforcement and graceful degradation."""

from __future__ import annotations

from dataclasses import dataclass

from convds.errors import JsonParseError, NoJsonFound, ValidationFailure
from convds.gateway import AgentId, extract_json
from convds.dialogue.states import (
    DialogueState,
    Intent,
    allowed_next,
    allowed_next_text,
    normalize_state,
    parse_intent,
)

# Appended to the directive when the first reply violates the whitelist or
# cannot be parsed; {next_states} is bound to the rendered whitelist.
RETRY_SUFFIX = "Next state should be from the following states - {next_states}"


@dataclass(frozen=True)
class IntentStateDecision:
    intent: Intent
    current_state: DialogueState
    next_state: DialogueState


def _parse_decision(reply: str, current: DialogueState) -> IntentStateDecision | None:
    """None on any validation problem; the caller decides retry vs fallback."""
    try:
        obj = extract_json(reply)
        intent = parse_intent(obj["intent"])
        reported = normalize_state(obj["current_state"])
        proposed = normalize_state(obj["next_state"])
    except (NoJsonFound, JsonParseError, ValidationFailure, KeyError, TypeError):
        return None
    if reported is not current:
        return None
    if proposed not in allowed_next(current):
        return None
    return IntentStateDecision(intent=intent, current_state=current, next_state=proposed)


def detect_intent_state(
    context: str,
    state: DialogueState | str,
    utterance: str,
    gateway,
) -> IntentStateDecision:
    """Classify an utterance into (intent, current state, next state).

    One retry with the whitelist spelled out in the directive; a second bad
    reply degrades to (chitchat, state, state) rather than surfacing an error.
    Transport failures propagate.
    """
    if not utterance or not utterance.strip():
        raise ValueError("utterance must be non-empty")
    current = normalize_state(state)
    bindings = {
        "context": context or "",
        "conversation state": current.value,
        "user input": utterance,
    }
    decision = _parse_decision(gateway.call(AgentId.STATE_DETECTOR, bindings), current)
    if decision is not None:
        return decision

    retry_bindings = dict(bindings, next_states=allowed_next_text(current))
    decision = _parse_decision(
        gateway.call(AgentId.STATE_DETECTOR, retry_bindings, directive_suffix=RETRY_SUFFIX),
        current,
    )
    if decision is not None:
        return decision
    return IntentStateDecision(intent=Intent.CHITCHAT, current_state=current, next_state=current)
