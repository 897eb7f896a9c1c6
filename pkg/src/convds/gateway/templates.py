"""Prompt templates: system setup + demonstrations + a directive with placeholders.

Placeholders look like {name} where name starts with a letter/underscore and may
contain spaces ({conversation state}). Anything else inside braces — JSON format
examples in the prompt text, say — is left alone. Demonstrations are stored
verbatim and never substituted.
"""
from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Mapping

from ..errors import MissingBinding

log = logging.getLogger(__name__)

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_ ]*)\}")


def placeholder_names(text: str) -> set[str]:
    """All placeholder names appearing in ``text``."""
    return set(_PLACEHOLDER.findall(text))


def substitute(text: str, bindings: Mapping[str, str]) -> str:
    """Replace every placeholder with its binding, verbatim, in one pass.

    Raises MissingBinding for a placeholder with no binding. Values are not
    re-scanned, so a binding may safely contain brace characters.
    """

    def _sub(match: re.Match[str]) -> str:
        name = match.group(1)
        if name not in bindings:
            raise MissingBinding(name)
        return str(bindings[name])

    return _PLACEHOLDER.sub(_sub, text)


@dataclass(frozen=True)
class Demonstration:
    user: str
    assistant: str


@dataclass(frozen=True)
class PromptTemplate:
    agent_id: str
    system_setup: str
    demonstrations: tuple[Demonstration, ...]
    directive_template: str
    level: int

    @property
    def placeholders(self) -> set[str]:
        return placeholder_names(self.system_setup) | placeholder_names(self.directive_template)

    def with_directive_suffix(self, suffix: str) -> "PromptTemplate":
        """A copy whose directive has ``suffix`` appended (corrective retries)."""
        return replace(self, directive_template=self.directive_template + "\n" + suffix)


@dataclass(frozen=True)
class PromptBundle:
    """A fully resolved prompt, ready for a provider."""

    agent_id: str
    system: str
    demonstrations: tuple[Demonstration, ...]
    directive: str
    level: int
    fingerprint: str = field(init=False)

    def __post_init__(self) -> None:
        digest = hashlib.sha256(
            "\x1f".join((self.agent_id, self.system, self.directive)).encode("utf-8")
        ).hexdigest()[:16]
        object.__setattr__(self, "fingerprint", digest)


def assemble_prompt(template: PromptTemplate, bindings: Mapping[str, str]) -> PromptBundle:
    """Resolve a template against bindings.

    Every placeholder must have a binding (MissingBinding otherwise); bindings
    that match no placeholder are logged as a warning and ignored.
    """
    declared = template.placeholders
    unused = set(bindings) - declared
    if unused:
        log.warning("agent %s: unused bindings %s", template.agent_id, sorted(unused))
    return PromptBundle(
        agent_id=template.agent_id,
        system=substitute(template.system_setup, bindings),
        demonstrations=template.demonstrations,
        directive=substitute(template.directive_template, bindings),
        level=template.level,
    )
