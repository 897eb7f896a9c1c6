"""Canonical dialogue states, intents, and the transition whitelist."""

from __future__ import annotations

from enum import Enum

from convds.errors import ValidationFailure


class DialogueState(str, Enum):
    """The four conversation phases, in forward order."""

    DATA_VISUALIZATION = "data_visualization"
    TASK_SELECTION = "task_selection"
    TASK_FORMULATION = "task_formulation"
    MODEL_TRAINING = "model_training"

    def __str__(self) -> str:
        return self.value


class Intent(str, Enum):
    GET_DATASET_INFO = "get_dataset_info"
    GET_DATASET_TREND = "get_dataset_trend"
    SELECT_PROBLEM = "select_problem"
    FORMULATE_PROBLEM = "formulate_problem"
    PROBLEM_EXECUTION = "problem_execution"
    CHITCHAT = "chitchat"

    def __str__(self) -> str:
        return self.value


# Display forms as they appear in prompt text.
_INTENT_DISPLAY = {
    Intent.GET_DATASET_INFO: "Get dataset info",
    Intent.GET_DATASET_TREND: "Get dataset trend",
    Intent.SELECT_PROBLEM: "Select problem",
    Intent.FORMULATE_PROBLEM: "Formulate problem",
    Intent.PROBLEM_EXECUTION: "Problem execution",
    Intent.CHITCHAT: "chitchat",
}

_INTENT_BY_KEY = {display.lower(): intent for intent, display in _INTENT_DISPLAY.items()}

# Presentation names used across prompt templates and provider replies, keyed
# by their space-normalized lowercase form. "ask selection" plays the same
# transition role as task selection and is kept as an alias of it.
_STATE_ALIASES = {
    "data visualization": DialogueState.DATA_VISUALIZATION,
    "dataset understanding": DialogueState.DATA_VISUALIZATION,
    "task selection": DialogueState.TASK_SELECTION,
    "problem selection": DialogueState.TASK_SELECTION,
    "ask selection": DialogueState.TASK_SELECTION,
    "task formulation": DialogueState.TASK_FORMULATION,
    "model training": DialogueState.MODEL_TRAINING,
    "task execution": DialogueState.MODEL_TRAINING,
    "prediction engineering": DialogueState.MODEL_TRAINING,
    "result summary": DialogueState.MODEL_TRAINING,
}

_TRANSITIONS = {
    DialogueState.DATA_VISUALIZATION: frozenset(
        {DialogueState.DATA_VISUALIZATION, DialogueState.TASK_SELECTION}
    ),
    DialogueState.TASK_SELECTION: frozenset(
        {DialogueState.TASK_SELECTION, DialogueState.TASK_FORMULATION}
    ),
    DialogueState.TASK_FORMULATION: frozenset(
        {DialogueState.TASK_FORMULATION, DialogueState.MODEL_TRAINING}
    ),
    DialogueState.MODEL_TRAINING: frozenset({DialogueState.MODEL_TRAINING}),
}

# Forward order used when rendering a whitelist as text.
_STATE_ORDER = list(DialogueState)


def _normalize_key(name: object) -> str:
    return " ".join(str(name).strip().lower().replace("_", " ").split())


def normalize_state(name: object) -> DialogueState:
    """Map any known state spelling (canonical or alias) to its canonical state."""
    if isinstance(name, DialogueState):
        return name
    key = _normalize_key(name)
    try:
        return _STATE_ALIASES[key]
    except KeyError:
        raise ValidationFailure(f"unknown dialogue state: {name!r}") from None


def parse_intent(text: object) -> Intent:
    """Parse a provider-reported intent, case- and space-insensitively."""
    key = _normalize_key(text).replace("_", " ")
    try:
        return _INTENT_BY_KEY[key]
    except KeyError:
        raise ValidationFailure(f"unknown intent: {text!r}") from None


def intent_display(intent: Intent) -> str:
    return _INTENT_DISPLAY[intent]


def allowed_next(state: DialogueState | str) -> frozenset[DialogueState]:
    """Legal next states: stay put, or advance one phase (training is absorbing)."""
    return _TRANSITIONS[normalize_state(state)]


def allowed_next_text(state: DialogueState | str) -> str:
    """Whitelist rendered for prompt text, e.g. ``[data_visualization, task_selection]``."""
    allowed = allowed_next(state)
    names = [s.value for s in _STATE_ORDER if s in allowed]
    return "[" + ", ".join(names) + "]"
