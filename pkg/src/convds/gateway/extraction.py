"""Pull the first JSON object out of free-form model output.

Providers wrap JSON in prose, code fences, apologies. The scanner walks the
text for balanced top-level brace regions (quote-aware, so braces inside
string literals do not count) and returns the first region that json.loads
accepts. Shorter regions starting at the same brace cannot parse when the
full region does, so depth matching and "first valid object" agree.
"""
from __future__ import annotations

import json
from typing import Any

from ..errors import JsonParseError, NoJsonFound


def _balanced_end(text: str, start: int) -> int | None:
    """Index just past the brace that closes text[start] == '{', or None."""
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
    return None


def find_balanced_object(text: str) -> str | None:
    """The first balanced ``{...}`` region, valid JSON or not (None when absent)."""
    i = text.find("{")
    while i != -1:
        end = _balanced_end(text, i)
        if end is not None:
            return text[i:end]
        i = text.find("{", i + 1)
    return None


def extract_json(text: str) -> dict[str, Any]:
    """Return the first syntactically valid top-level JSON object in ``text``.

    Raises NoJsonFound when no brace region parses, JsonParseError(position)
    when a region opens but never balances (and nothing else parsed).
    """
    first_unbalanced: int | None = None
    saw_brace = False
    i = text.find("{")
    while i != -1:
        saw_brace = True
        end = _balanced_end(text, i)
        if end is None:
            if first_unbalanced is None:
                first_unbalanced = i
        else:
            try:
                value = json.loads(text[i:end])
            except ValueError:
                value = None
            if isinstance(value, dict):
                return value
        i = text.find("{", i + 1)
    if first_unbalanced is not None:
        raise JsonParseError(first_unbalanced)
    if saw_brace:
        raise NoJsonFound(f"brace regions found but none parse: {text[:80]!r}")
    raise NoJsonFound(f"no JSON object in reply: {text[:80]!r}")
