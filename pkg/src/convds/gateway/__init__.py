"""Single gate every model call goes through: template lookup, binding
substitution, provider dispatch with retries, optional per-call event recording.
"""
from __future__ import annotations

import time
from typing import Callable, Mapping

from .providers import (
    DEFAULT_ATTEMPTS,
    DEFAULT_BACKOFF,
    DEFAULT_TIMEOUT,
    HttpProvider,
    Provider,
    ProviderResponse,
    ScriptEntry,
    ScriptedProvider,
    complete,
)
from .registry import DEFAULT_LEVELS, AgentId, TemplateRegistry, default_registry
from .templates import Demonstration, PromptBundle, PromptTemplate, assemble_prompt
from .extraction import extract_json

__all__ = [
    "AgentId",
    "Demonstration",
    "Gateway",
    "HttpProvider",
    "PromptBundle",
    "PromptTemplate",
    "Provider",
    "ProviderResponse",
    "ScriptEntry",
    "ScriptedProvider",
    "TemplateRegistry",
    "assemble_prompt",
    "complete",
    "default_registry",
    "extract_json",
    "DEFAULT_LEVELS",
]

Recorder = Callable[[dict], None]


class Gateway:
    """Binds a provider to the template registry.

    ``level_override`` pins every agent that supports the level to it (agents
    that do not fall back to their default level); explicit ``level`` arguments
    on call() win over both.
    """

    def __init__(
        self,
        provider: Provider,
        registry: TemplateRegistry | None = None,
        *,
        timeout: float = DEFAULT_TIMEOUT,
        attempts: int = DEFAULT_ATTEMPTS,
        backoff: tuple[float, ...] = DEFAULT_BACKOFF,
        level_override: int | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.provider = provider
        self.registry = registry or default_registry()
        self.timeout = timeout
        self.attempts = attempts
        self.backoff = backoff
        self.level_override = level_override
        self._sleep = sleep

    def _resolve_level(self, agent: AgentId, level: int | None) -> int | None:
        if level is not None:
            return level
        if self.level_override is not None and self.level_override in self.registry.supported_levels(agent):
            return self.level_override
        return None  # registry default

    def call(
        self,
        agent: AgentId,
        bindings: Mapping[str, str],
        *,
        level: int | None = None,
        directive_suffix: str = "",
        recorder: Recorder | None = None,
    ) -> str:
        template = self.registry.template_for(agent, self._resolve_level(agent, level))
        if directive_suffix:
            template = template.with_directive_suffix(directive_suffix)
        bundle = assemble_prompt(template, bindings)
        response = complete(
            bundle,
            self.provider,
            timeout=self.timeout,
            attempts=self.attempts,
            backoff=self.backoff,
            sleep=self._sleep,
        )
        if recorder is not None:
            recorder(
                {
                    "kind": "agent_call",
                    "agent": agent.value,
                    "level": bundle.level,
                    "fingerprint": bundle.fingerprint,
                    "reply": response.text,
                }
            )
        return response.text

    def recorded(self, recorder: Recorder) -> "RecordingGateway":
        """A view whose calls all feed ``recorder`` (one turn's event buffer)."""
        return RecordingGateway(self, recorder)


class RecordingGateway:
    """Per-turn view over a Gateway; safe to hand to sub-operations."""

    def __init__(self, gateway: Gateway, recorder: Recorder):
        self._gateway = gateway
        self._recorder = recorder
        self.registry = gateway.registry

    def call(
        self,
        agent: AgentId,
        bindings: Mapping[str, str],
        *,
        level: int | None = None,
        directive_suffix: str = "",
        recorder: Recorder | None = None,
    ) -> str:
        return self._gateway.call(
            agent,
            bindings,
            level=level,
            directive_suffix=directive_suffix,
            recorder=recorder or self._recorder,
        )

    def recorded(self, recorder: Recorder) -> "RecordingGateway":
        return RecordingGateway(self._gateway, recorder)
