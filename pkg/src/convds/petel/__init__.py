"""Task expression schemas and the slot-filling micro-agents."""

from convds.petel.schema import (
    KNOWN_METHODS,
    MlTask,
    SlotSchema,
    SlotSpec,
    parse_ml_task,
    schema_for,
)
from convds.petel.expression import (
    CONDITIONS,
    SKIPPED,
    FilterSpec,
    Petel,
    blank_petel,
    is_complete,
    mark_optionals_skipped,
    next_unfilled_slot,
    parse_petel,
    serialize_petel,
)
from convds.petel.agents import describe, feed, seek, select_task

__all__ = [
    "CONDITIONS",
    "KNOWN_METHODS",
    "FilterSpec",
    "MlTask",
    "Petel",
    "SKIPPED",
    "SlotSchema",
    "SlotSpec",
    "blank_petel",
    "describe",
    "feed",
    "is_complete",
    "mark_optionals_skipped",
    "next_unfilled_slot",
    "parse_ml_task",
    "parse_petel",
    "schema_for",
    "seek",
    "select_task",
    "serialize_petel",
]
