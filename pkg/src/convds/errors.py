"""Exception taxonomy shared across the engine.

Grouping matters more than depth here: ValidationFailure maps to HTTP 422 /
CLI exit 3, TransportFailure to HTTP 502 / CLI exit 4. Everything else is a
plain EngineError.
"""
from __future__ import annotations


class EngineError(Exception):
    """Base class for every error raised by this package."""


class ValidationFailure(EngineError):
    """Bad input or a reply that failed semantic validation (HTTP 422, exit 3)."""


class TransportFailure(EngineError):
    """Provider or backend could not be reached or misbehaved (HTTP 502, exit 4)."""

    #: retry loops consult this; deterministic failures set it to False
    retriable: bool = True


# --------------------------------------------------------------------------- gateway

class MissingBinding(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"no binding supplied for placeholder {{{name}}}")
        self.name = name


class UnsupportedLevel(ValidationFailure):
    def __init__(self, agent: str, level: int):
        super().__init__(f"agent {agent!r} has no directive registered for level {level}")
        self.agent = agent
        self.level = level


class NoJsonFound(ValidationFailure):
    """The text contains no parseable top-level JSON object."""


class JsonParseError(ValidationFailure):
    """A brace region opens but never balances."""

    def __init__(self, position: int):
        super().__init__(f"unbalanced JSON object starting at offset {position}")
        self.position = position


class ProviderTimeout(TransportFailure):
    """The provider did not answer within the configured timeout."""


class TransportError(TransportFailure):
    """Connection-level failure talking to the provider."""


class ProviderRefusal(EngineError):
    """The provider answered but refused the request (non-2xx or explicit refusal)."""

    def __init__(self, detail: str, status: int | None = None):
        super().__init__(detail)
        self.status = status


class ScriptExhausted(TransportError):
    retriable = False

    def __init__(self) -> None:
        super().__init__("scripted transcript has no entries left")


class ScriptMismatch(TransportError):
    retriable = False

    def __init__(self, expected: str, got: str):
        super().__init__(f"scripted transcript expected {expected}, got {got}")
        self.expected = expected
        self.got = got


# --------------------------------------------------------------------------- dialogue

class SummaryEmpty(ValidationFailure):
    """The summarizer returned an empty reply."""


class DatasetMissing(EngineError):
    """Task progress was attempted before any dataset was uploaded (HTTP 409)."""


# --------------------------------------------------------------------------- dataset-io

class DecodeError(ValidationFailure):
    """Input bytes are not valid UTF-8."""


class RaggedRow(ValidationFailure):
    def __init__(self, line: int, expected: int, got: int):
        super().__init__(f"row at line {line} has {got} cells, header has {expected}")
        self.line = line


class EmptyInput(ValidationFailure):
    """Zero-byte body or no header record."""


class DuplicateColumn(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"duplicate column name {name!r}")
        self.name = name


class EmptyDataset(ValidationFailure):
    """The operation needs at least one data row."""


class SchemaViolation(ValidationFailure):
    def __init__(self, missing_keys: list[str]):
        super().__init__(f"summary reply is missing required parts: {', '.join(missing_keys)}")
        self.missing_keys = missing_keys


class TooFewTasks(ValidationFailure):
    def __init__(self, found: list[str]):
        super().__init__(f"need at least two recognized tasks, got {found or 'none'}")
        self.found = found


# --------------------------------------------------------------------------- petel

class InvalidTask(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"{name!r} is not one of the six supported task types")
        self.name = name


class UnknownSlot(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"slot {name!r} is not part of this task's schema")
        self.name = name


class TypeMismatch(ValidationFailure):
    def __init__(self, slot: str, detail: str = ""):
        super().__init__(f"value for slot {slot!r} has the wrong shape" + (f": {detail}" if detail else ""))
        self.slot = slot


# --------------------------------------------------------------------------- prediction engineering

class UnknownColumn(ValidationFailure):
    def __init__(self, name: str, candidates: list[str]):
        hint = f" (closest columns: {', '.join(candidates)})" if candidates else ""
        super().__init__(f"column {name!r} not found in dataset{hint}")
        self.name = name
        self.candidates = candidates


class TargetInFeatures(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"target column {name!r} also appears in the feature list")
        self.name = name


class IncompatibleCondition(ValidationFailure):
    def __init__(self, column: str, condition: str, detail: str = ""):
        super().__init__(
            f"filter condition {condition!r} is incompatible with column {column!r}"
            + (f": {detail}" if detail else "")
        )
        self.column = column
        self.condition = condition


class DegenerateTarget(ValidationFailure):
    def __init__(self, distinct: int):
        super().__init__(f"target has {distinct} distinct value(s); need at least 2")
        self.distinct = distinct


class EmptyAfterFilter(ValidationFailure):
    """No rows survived filtering (or none had a usable target value)."""


class UnknownMetric(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"metric {name!r} is not in the canonical metric set")
        self.name = name


class UnknownMethod(ValidationFailure):
    def __init__(self, name: str):
        super().__init__(f"method {name!r} is not in this task's method vocabulary")
        self.name = name


class BackendUnreachable(TransportFailure):
    """Could not connect to the training backend."""


class ProtocolError(TransportFailure):
    """The backend answered with a body that violates the wire contract."""

    retriable = False


# --------------------------------------------------------------------------- results

class NoSuccessfulMethods(ValidationFailure):
    """Every requested method failed; there is nothing to rank."""


# --------------------------------------------------------------------------- service / replay

class UnknownSession(EngineError):
    def __init__(self, session_id: str):
        super().__init__(f"no session {session_id!r}")
        self.session_id = session_id


class StateConflict(EngineError):
    """The operation is valid in general but not in the session's current state."""


class InvalidTransition(ValidationFailure):
    def __init__(self, current: str, proposed: str):
        super().__init__(f"transition {current} -> {proposed} is not allowed")
        self.current = current
        self.proposed = proposed


class ReplayCorrupt(ValidationFailure):
    """An event log violates an invariant and cannot be replayed."""
