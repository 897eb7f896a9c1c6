"""Provider handles: live HTTP chat completion and a deterministic scripted stand-in.

complete() wraps any provider with the retry policy: transport failures are
retried up to the attempt budget with fixed backoff, refusals and scripted
(deterministic) failures are not.
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Protocol, runtime_checkable

from ..errors import (
    ProviderRefusal,
    ProviderTimeout,
    ScriptExhausted,
    ScriptMismatch,
    TransportError,
    TransportFailure,
)
from .templates import PromptBundle

DEFAULT_TIMEOUT = 30.0
DEFAULT_ATTEMPTS = 3
DEFAULT_BACKOFF = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    raw: Any = None


@runtime_checkable
class Provider(Protocol):
    def send(self, bundle: PromptBundle, timeout: float) -> ProviderResponse: ...


def complete(
    bundle: PromptBundle,
    provider: Provider,
    timeout: float = DEFAULT_TIMEOUT,
    attempts: int = DEFAULT_ATTEMPTS,
    backoff: tuple[float, ...] = DEFAULT_BACKOFF,
    sleep: Callable[[float], None] = time.sleep,
) -> ProviderResponse:
    """One blocking completion with retries on retriable transport failures."""
    if timeout <= 0:
        raise ValueError("timeout must be positive")
    if attempts < 1:
        raise ValueError("attempts must be at least 1")
    for attempt in range(attempts):
        try:
            return provider.send(bundle, timeout)
        except TransportFailure as exc:
            if not exc.retriable or attempt == attempts - 1:
                raise
            sleep(backoff[min(attempt, len(backoff) - 1)])
    raise AssertionError("unreachable")


# ----------------------------------------------------------------- scripted mode

@dataclass(frozen=True)
class ScriptEntry:
    """One transcript line: a match pattern and the canned reply."""

    reply: str
    agent: str | None = None  # None or "*" matches any agent
    contains: str | None = None  # substring that must occur in the directive

    def matches(self, bundle: PromptBundle) -> bool:
        if self.agent not in (None, "*") and self.agent != bundle.agent_id:
            return False
        if self.contains is not None and self.contains not in bundle.directive:
            return False
        return True

    def describe(self) -> str:
        want = self.agent or "*"
        if self.contains:
            want += f" (directive containing {self.contains!r})"
        return want

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> "ScriptEntry":
        match = record.get("match", {})
        return cls(
            reply=record["reply"],
            agent=match.get("agent"),
            contains=match.get("contains"),
        )


class ScriptedProvider:
    """Replays a canned transcript; performs no network activity at all.

    Default mode consumes, per call, the first remaining entry that matches the
    bundle. Strict-order mode requires the head entry to match, which is how
    recorded sessions are replayed bit-for-bit.
    """

    def __init__(self, entries: Iterable[ScriptEntry], strict_order: bool = False):
        self._entries: list[ScriptEntry] = list(entries)
        self._strict = strict_order
        self._lock = threading.Lock()

    @classmethod
    def from_jsonl(cls, path: str | Path, strict_order: bool = False) -> "ScriptedProvider":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            entries.append(ScriptEntry.from_record(json.loads(line)))
        return cls(entries, strict_order=strict_order)

    @property
    def remaining(self) -> int:
        with self._lock:
            return len(self._entries)

    def send(self, bundle: PromptBundle, timeout: float) -> ProviderResponse:
        del timeout  # deterministic replies are instantaneous
        with self._lock:
            if not self._entries:
                raise ScriptExhausted()
            if self._strict:
                head = self._entries[0]
                if not head.matches(bundle):
                    raise ScriptMismatch(head.describe(), bundle.agent_id)
                self._entries.pop(0)
                return ProviderResponse(text=head.reply)
            for i, entry in enumerate(self._entries):
                if entry.matches(bundle):
                    self._entries.pop(i)
                    return ProviderResponse(text=entry.reply)
            raise ScriptMismatch(self._entries[0].describe(), bundle.agent_id)


# ----------------------------------------------------------------- live provider

class HttpProvider:
    """OpenAI-style chat-completion client (system + demo turns + directive)."""

    def __init__(
        self,
        base_url: str,
        api_key: str = "",
        model: str = "gpt-3.5-turbo",
        temperature: float = 0.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.model = model
        self.temperature = temperature

    def _messages(self, bundle: PromptBundle) -> list[dict[str, str]]:
        messages = [{"role": "system", "content": bundle.system}]
        for demo in bundle.demonstrations:
            messages.append({"role": "user", "content": demo.user})
            messages.append({"role": "assistant", "content": demo.assistant})
        messages.append({"role": "user", "content": bundle.directive})
        return messages

    def send(self, bundle: PromptBundle, timeout: float) -> ProviderResponse:
        import httpx

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": self._messages(bundle),
        }
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=timeout,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code < 200 or response.status_code >= 300:
            raise ProviderRefusal(
                f"provider returned {response.status_code}: {response.text[:200]}",
                status=response.status_code,
            )
        try:
            payload = response.json()
            text = payload["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise ProviderRefusal(f"malformed provider response: {exc}") from exc
        return ProviderResponse(text=text or "", raw=payload)
