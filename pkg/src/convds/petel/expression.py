"""Task expression objects: parsing, serialization, completeness.

The relaxed parser accepts the loosely quoted object style the provider tends
to emit (bare tokens like `1 month`, `None` for null, single quotes) as well
as strict JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from convds.errors import NoJsonFound, TypeMismatch, UnknownSlot
from convds.gateway.extraction import find_balanced_object
from convds.petel.schema import (
    FILTER_LIST,
    LIST,
    SCALAR,
    MlTask,
    SlotSchema,
    SlotSpec,
    parse_ml_task,
    schema_for,
)

# A declined optional slot is marked rather than left null, so the seek loop
# does not re-ask for it.
SKIPPED = "skipped"

CONDITIONS = frozenset(
    {
        "equals",
        "not_equals",
        "greater_than",
        "less_than",
        "greater_equal",
        "less_equal",
        "in",
        "between",
    }
)

_NULL_TRIPLE = {"column": None, "condition": None, "value": None}

_SLOT_SYNONYMS = {
    "target_variables": "target_variable",
}

_STRUCTURAL = set("{}[]:,")


@dataclass(frozen=True)
class FilterSpec:
    column: str
    condition: str
    value: object

    def as_dict(self) -> dict:
        return {"column": self.column, "condition": self.condition, "value": self.value}


@dataclass(frozen=True)
class Petel:
    problem_type: MlTask
    values: dict = field(default_factory=dict)

    @property
    def schema(self) -> SlotSchema:
        return schema_for(self.problem_type)

    def value(self, slot: str):
        return self.values[slot]

    def with_values(self, values: dict) -> "Petel":
        return Petel(problem_type=self.problem_type, values=values)


# --- relaxed object parsing -------------------------------------------------


def _lex(text: str) -> Iterator[tuple[str, str]]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _STRUCTURAL:
            yield "punct", ch
            i += 1
            continue
        if ch in "\"'":
            quote = ch
            j = i + 1
            out = []
            while j < n:
                c = text[j]
                if c == "\\" and j + 1 < n:
                    out.append(text[j + 1])
                    j += 2
                    continue
                if c == quote:
                    break
                out.append(c)
                j += 1
            yield "string", "".join(out)
            i = j + 1
            continue
        j = i
        while j < n and text[j] not in _STRUCTURAL and text[j] not in "\"'":
            j += 1
        atom = text[i:j].strip()
        if atom:
            yield "atom", atom
        i = j


def _atom_value(atom: str):
    low = atom.lower()
    if low in ("null", "none"):
        return None
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(atom)
    except ValueError:
        pass
    try:
        return float(atom)
    except ValueError:
        pass
    return atom


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, ch: str):
        kind, val = self.take()
        if kind != "punct" or val != ch:
            raise ValueError(f"expected {ch!r}, got {val!r}")

    def value(self):
        kind, val = self.peek()
        if kind == "punct" and val == "{":
            return self.obj()
        if kind == "punct" and val == "[":
            return self.arr()
        if kind == "string":
            self.take()
            return val
        if kind == "atom":
            self.take()
            return _atom_value(val)
        raise ValueError(f"unexpected token {val!r}")

    def obj(self) -> dict:
        self.expect("{")
        out: dict = {}
        kind, val = self.peek()
        if kind == "punct" and val == "}":
            self.take()
            return out
        while True:
            kind, key = self.take()
            if kind not in ("string", "atom"):
                raise ValueError(f"expected key, got {key!r}")
            self.expect(":")
            out[str(key).strip()] = self.value()
            kind, val = self.take()
            if kind == "punct" and val == "}":
                return out
            if not (kind == "punct" and val == ","):
                raise ValueError(f"expected , or }} in object, got {val!r}")
            # tolerate a trailing comma before the closing brace
            kind, val = self.peek()
            if kind == "punct" and val == "}":
                self.take()
                return out

    def arr(self) -> list:
        self.expect("[")
        out: list = []
        kind, val = self.peek()
        if kind == "punct" and val == "]":
            self.take()
            return out
        while True:
            out.append(self.value())
            kind, val = self.take()
            if kind == "punct" and val == "]":
                return out
            if not (kind == "punct" and val == ","):
                raise ValueError(f"expected , or ] in array, got {val!r}")
            kind, val = self.peek()
            if kind == "punct" and val == "]":
                self.take()
                return out


def relaxed_object(text: str) -> dict:
    """First top-level object in ``text``, parsed leniently."""
    region = find_balanced_object(text)
    if region is None:
        raise NoJsonFound("no object found in text")
    try:
        strict = json.loads(region)
        if isinstance(strict, dict):
            return strict
    except json.JSONDecodeError:
        pass
    parser = _Parser(list(_lex(region)))
    try:
        return parser.obj()
    except ValueError as exc:
        raise NoJsonFound(f"object does not parse: {exc}") from None


# --- slot/value validation ---------------------------------------------------


def _is_scalar(value) -> bool:
    return isinstance(value, (str, int, float, bool))


def _validate_filters(raw, slot: str) -> list:
    if raw == SKIPPED:
        return SKIPPED
    if not isinstance(raw, list):
        raise TypeMismatch(slot, f"expected a list of filters, got {type(raw).__name__}")
    out = []
    for item in raw:
        if not isinstance(item, dict):
            raise TypeMismatch(slot, f"filter entries must be objects, got {type(item).__name__}")
        extra = set(item) - {"column", "condition", "value"}
        if extra:
            raise TypeMismatch(slot, f"unknown filter keys: {sorted(extra)}")
        column = item.get("column")
        condition = item.get("condition")
        value = item.get("value")
        if column is None and condition is None and value is None:
            out.append(dict(_NULL_TRIPLE))
            continue
        if column is None or condition is None:
            raise TypeMismatch(slot, "partially filled filter entry")
        cond = " ".join(str(condition).strip().lower().split()).replace(" ", "_")
        if cond not in CONDITIONS:
            raise TypeMismatch(slot, f"unknown condition: {condition!r}")
        if cond == "between":
            if not (isinstance(value, list) and len(value) == 2):
                raise TypeMismatch(slot, "between needs a [low, high] pair")
        elif cond == "in":
            if not (_is_scalar(value) or isinstance(value, list)):
                raise TypeMismatch(slot, "in needs a scalar or a list")
        elif not _is_scalar(value):
            raise TypeMismatch(slot, f"condition {cond} needs a scalar value")
        out.append({"column": str(column), "condition": cond, "value": value})
    return out


def _validate_slot_value(spec: SlotSpec, value):
    if value is None:
        return None
    if spec.kind == FILTER_LIST:
        return _validate_filters(value, spec.name)
    if value == SKIPPED and not spec.required:
        return SKIPPED
    if spec.kind == SCALAR:
        if not _is_scalar(value):
            raise TypeMismatch(spec.name, f"expected a scalar, got {type(value).__name__}")
        return value
    if spec.kind == LIST:
        if not isinstance(value, list) or not all(_is_scalar(v) for v in value):
            raise TypeMismatch(spec.name, "expected a list of scalar values")
        return list(value)
    raise TypeMismatch(spec.name, f"unhandled kind {spec.kind}")


def slot_is_filled(spec: SlotSpec, value) -> bool:
    if value is None:
        return False
    if spec.kind == FILTER_LIST:
        if value == SKIPPED:
            return True
        return any(entry.get("column") is not None for entry in value)
    return True


# --- petel construction -------------------------------------------------------


def blank_petel(task: MlTask | str) -> Petel:
    schema = schema_for(task)
    values: dict = {}
    for spec in schema.fillable_slots:
        if spec.kind == FILTER_LIST:
            values[spec.name] = [dict(_NULL_TRIPLE), dict(_NULL_TRIPLE)]
        else:
            values[spec.name] = None
    return Petel(problem_type=schema.task, values=values)


def parse_petel(text: str, expected_task: MlTask | None = None) -> Petel:
    """Parse a full task expression object out of free text."""
    raw = relaxed_object(text)
    normalized: dict = {}
    for key, value in raw.items():
        name = str(key).strip().lower().replace(" ", "_")
        name = _SLOT_SYNONYMS.get(name, name)
        normalized[name] = value

    if "problem_type" in normalized:
        task = parse_ml_task(normalized.pop("problem_type"))
    elif expected_task is not None:
        task = expected_task
    else:
        raise TypeMismatch("problem_type", "missing from object")

    schema = schema_for(task)
    values: dict = {}
    for key, value in normalized.items():
        if not schema.has_slot(key) or not schema.slot(key).fillable:
            raise UnknownSlot(f"unknown slot: {key!r}")
        values[key] = _validate_slot_value(schema.slot(key), value)
    for spec in schema.fillable_slots:
        values.setdefault(spec.name, None)
    return Petel(problem_type=task, values=values)


def serialize_petel(petel: Petel) -> str:
    """Canonical JSON, slots in schema order, problem_type first."""
    obj: dict = {"problem_type": petel.problem_type.value}
    for spec in petel.schema.fillable_slots:
        obj[spec.name] = petel.values.get(spec.name)
    return json.dumps(obj, indent=2)


def to_dict(petel: Petel) -> dict:
    return json.loads(serialize_petel(petel))


def real_filters(petel: Petel) -> list[FilterSpec]:
    """The semantic filters: null placeholder triples and skips drop out."""
    if not petel.schema.has_slot("data_filters"):
        return []
    raw = petel.values.get("data_filters")
    if raw is None or raw == SKIPPED:
        return []
    return [
        FilterSpec(column=e["column"], condition=e["condition"], value=e["value"])
        for e in raw
        if e.get("column") is not None
    ]


def is_complete(petel: Petel) -> tuple[bool, list[str]]:
    """True when every required slot is filled; also the missing-slot list."""
    missing = [
        spec.name
        for spec in petel.schema.required_slots
        if not slot_is_filled(spec, petel.values.get(spec.name))
    ]
    return (not missing, missing)


def next_unfilled_slot(petel: Petel) -> str | None:
    """Required slots in schema order first, then unresolved optionals."""
    for spec in petel.schema.required_slots:
        if not slot_is_filled(spec, petel.values.get(spec.name)):
            return spec.name
    for spec in petel.schema.optional_slots:
        if not slot_is_filled(spec, petel.values.get(spec.name)):
            return spec.name
    return None


def mark_optionals_skipped(petel: Petel) -> Petel:
    values = dict(petel.values)
    for spec in petel.schema.optional_slots:
        if not slot_is_filled(spec, values.get(spec.name)):
            values[spec.name] = SKIPPED
    return petel.with_values(values)
