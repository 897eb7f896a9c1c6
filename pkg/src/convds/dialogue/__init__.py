"""Dialogue state machine, intent detection, summarization, and turn orchestration."""

from convds.dialogue.detector import IntentStateDecision, detect_intent_state
from convds.dialogue.states import (
    DialogueState,
    Intent,
    allowed_next,
    intent_display,
    normalize_state,
    parse_intent,
)
from convds.dialogue.summarizer import fence_history, summarize_dialogue

__all__ = [
    "DialogueState",
    "Intent",
    "IntentStateDecision",
    "allowed_next",
    "detect_intent_state",
    "fence_history",
    "intent_display",
    "normalize_state",
    "parse_intent",
    "summarize_dialogue",
]
