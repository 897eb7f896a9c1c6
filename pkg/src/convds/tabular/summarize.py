"""Dataset summarization micro-agent: strict four-part JSON out of the provider."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from convds.errors import JsonParseError, NoJsonFound, SchemaViolation
from convds.gateway import AgentId, extract_json
from convds.tabular.miniature import MiniDataset

log = logging.getLogger(__name__)

_REQUIRED_KEYS = ("summary", "columns", "row", "trend")


@dataclass(frozen=True)
class ColumnNote:
    name: str
    description: str


@dataclass(frozen=True)
class DatasetSummary:
    summary: str
    columns: tuple[ColumnNote, ...]
    row: str
    trend: str


def _missing_keys(obj: dict) -> list[str]:
    missing = []
    for key in _REQUIRED_KEYS:
        value = obj.get(key)
        if value is None or value == "" or value == []:
            missing.append(key)
    return missing


def _parse_columns(raw: object) -> tuple[ColumnNote, ...]:
    notes = []
    if not isinstance(raw, list):
        raise SchemaViolation(["columns"])
    for item in raw:
        if isinstance(item, dict) and "name" in item:
            notes.append(ColumnNote(name=str(item["name"]), description=str(item.get("description", ""))))
        elif isinstance(item, str):
            notes.append(ColumnNote(name=item, description=""))
        else:
            raise SchemaViolation(["columns"])
    return tuple(notes)


def summarize_dataset(mini: MiniDataset, gateway) -> DatasetSummary:
    """One retry naming the missing keys, then SchemaViolation."""
    bindings = {"dataset": mini.rendered}
    reply = gateway.call(AgentId.DATASET_SUMMARIZER, bindings)
    obj = None
    try:
        obj = extract_json(reply)
    except (NoJsonFound, JsonParseError):
        pass
    missing = _missing_keys(obj) if isinstance(obj, dict) else list(_REQUIRED_KEYS)

    if missing:
        suffix = (
            "The previous response was missing the required keys: ["
            + ", ".join(missing)
            + "]. Respond again with one JSON object containing all of: summary, columns, row, trend."
        )
        reply = gateway.call(AgentId.DATASET_SUMMARIZER, bindings, directive_suffix=suffix)
        try:
            obj = extract_json(reply)
        except (NoJsonFound, JsonParseError):
            raise SchemaViolation(list(_REQUIRED_KEYS)) from None
        missing = _missing_keys(obj)
        if missing:
            raise SchemaViolation(missing)

    columns = _parse_columns(obj["columns"])
    known = set(mini.header)
    strange = [c.name for c in columns if c.name not in known]
    if strange:
        log.warning("summary describes columns not present in the dataset: %s", strange)
    return DatasetSummary(
        summary=str(obj["summary"]),
        columns=columns,
        row=str(obj["row"]),
        trend=str(obj["trend"]),
    )
