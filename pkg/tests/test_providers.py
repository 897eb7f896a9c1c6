"""Provider handles: retry policy, scripted replay, HTTP client, gateway glue."""

from __future__ import annotations

import json

import pytest

from conftest import QueueProvider, queue_gateway
from convds.errors import (
    ProviderRefusal,
    ProviderTimeout,
    ScriptExhausted,
    ScriptMismatch,
    TransportError,
)
from convds.gateway import AgentId, Gateway, assemble_prompt, default_registry
from convds.gateway.providers import (
    HttpProvider,
    ProviderResponse,
    ScriptEntry,
    ScriptedProvider,
    complete,
)
from convds.gateway.templates import Demonstration, PromptTemplate


def _bundle(agent: str = "state_detector", directive: str = "classify this"):
    template = PromptTemplate(
        agent_id=agent,
        system_setup="sys",
        demonstrations=(Demonstration(user="u", assistant="a"),),
        directive_template=directive,
        level=1,
    )
    return assemble_prompt(template, {})


# ------------------------------------------------------------------- complete()

class _FlakyProvider:
    def __init__(self, failures, reply="ok"):
        self.failures = list(failures)
        self.reply = reply
        self.calls = 0

    def send(self, bundle, timeout):
        self.calls += 1
        if self.failures:
            raise self.failures.pop(0)
        return ProviderResponse(text=self.reply)


def test_retriable_failure_is_retried_with_backoff():
    slept = []
    provider = _FlakyProvider([TransportError("boom"), ProviderTimeout("slow")])
    response = complete(_bundle(), provider, sleep=slept.append)
    assert response.text == "ok"
    assert provider.calls == 3
    assert slept == [0.5, 1.0]


def test_attempt_budget_exhausted_reraises():
    provider = _FlakyProvider([TransportError("a"), TransportError("b"), TransportError("c")])
    with pytest.raises(TransportError):
        complete(_bundle(), provider, sleep=lambda _: None)
    assert provider.calls == 3


def test_backoff_clamps_to_last_value():
    slept = []
    provider = _FlakyProvider([TransportError("x")] * 4, reply="done")
    response = complete(
        _bundle(), provider, attempts=5, backoff=(0.1, 0.2), sleep=slept.append
    )
    assert response.text == "done"
    assert slept == [0.1, 0.2, 0.2, 0.2]


def test_nonretriable_failure_not_retried():
    provider = _FlakyProvider([ScriptExhausted()])
    with pytest.raises(ScriptExhausted):
        complete(_bundle(), provider, sleep=lambda _: None)
    assert provider.calls == 1


def test_refusal_propagates_without_retry():
    provider = _FlakyProvider([ProviderRefusal("nope", status=400)])
    with pytest.raises(ProviderRefusal):
        complete(_bundle(), provider, sleep=lambda _: None)
    assert provider.calls == 1


def test_argument_validation():
    with pytest.raises(ValueError):
        complete(_bundle(), _FlakyProvider([]), timeout=0)
    with pytest.raises(ValueError):
        complete(_bundle(), _FlakyProvider([]), attempts=0)


# ------------------------------------------------------------------- scripted

def test_scripted_unordered_matches_by_agent_and_contains():
    provider = ScriptedProvider(
        [
            ScriptEntry(reply="for feeder", agent="feeder"),
            ScriptEntry(reply="for detector", agent="state_detector"),
            ScriptEntry(reply="keyword hit", agent="*", contains="magic"),
        ]
    )
    assert provider.send(_bundle("state_detector"), 1.0).text == "for detector"
    assert provider.send(_bundle("seeker", "some magic word"), 1.0).text == "keyword hit"
    assert provider.send(_bundle("feeder"), 1.0).text == "for feeder"
    assert provider.remaining == 0


def test_scripted_unordered_mismatch():
    provider = ScriptedProvider([ScriptEntry(reply="r", agent="feeder")])
    with pytest.raises(ScriptMismatch):
        provider.send(_bundle("seeker"), 1.0)
    assert provider.remaining == 1  # nothing consumed


def test_scripted_strict_requires_head_match():
    provider = ScriptedProvider(
        [
            ScriptEntry(reply="first", agent="state_detector"),
            ScriptEntry(reply="second", agent="feeder"),
        ],
        strict_order=True,
    )
    with pytest.raises(ScriptMismatch) as err:
        provider.send(_bundle("feeder"), 1.0)  # matches entry 2, but head is 1
    assert err.value.got == "feeder"
    assert provider.send(_bundle("state_detector"), 1.0).text == "first"
    assert provider.send(_bundle("feeder"), 1.0).text == "second"


def test_scripted_exhausted():
    provider = ScriptedProvider([])
    with pytest.raises(ScriptExhausted):
        provider.send(_bundle(), 1.0)


def test_scripted_from_jsonl(tmp_path):
    path = tmp_path / "script.jsonl"
    lines = [
        {"match": {"agent": "seeker"}, "reply": "what size?"},
        {"match": {"agent": "*", "contains": "needle"}, "reply": "found"},
        {"reply": "anything goes"},
    ]
    path.write_text("\n".join(json.dumps(line) for line in lines) + "\n\n", encoding="utf-8")
    provider = ScriptedProvider.from_jsonl(path)
    assert provider.remaining == 3
    assert provider.send(_bundle("other", "has the needle here"), 1.0).text == "found"
    assert provider.send(_bundle("seeker"), 1.0).text == "what size?"
    assert provider.send(_bundle("whoever"), 1.0).text == "anything goes"


# ------------------------------------------------------------------- http

class _FakeHttpx:
    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.requests.append({"url": url, "json": json, "headers": headers})
        item = self.responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item


class _FakeResponse:
    def __init__(self, status_code, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text or json.dumps(payload)

    def json(self):
        if self._payload is None:
            raise ValueError("not json")
        return self._payload


def test_http_provider_builds_chat_messages(monkeypatch):
    import httpx

    fake = _FakeHttpx(
        [_FakeResponse(200, {"choices": [{"message": {"content": "reply!"}}]})]
    )
    monkeypatch.setattr(httpx, "post", fake.post)
    provider = HttpProvider("http://api.example/v1/", api_key="k", model="m")
    response = provider.send(_bundle(directive="do the thing"), 9.0)
    assert response.text == "reply!"
    sent = fake.requests[0]
    assert sent["url"] == "http://api.example/v1/chat/completions"
    assert sent["headers"]["Authorization"] == "Bearer k"
    roles = [m["role"] for m in sent["json"]["messages"]]
    assert roles == ["system", "user", "assistant", "user"]
    assert sent["json"]["messages"][-1]["content"] == "do the thing"


def test_http_provider_refusal_and_timeout(monkeypatch):
    import httpx

    fake = _FakeHttpx(
        [
            _FakeResponse(429, {"error": "rate"}),
            httpx.ConnectTimeout("slow"),
            _FakeResponse(200, None, text="<html>"),
        ]
    )
    monkeypatch.setattr(httpx, "post", fake.post)
    provider = HttpProvider("http://api.example")
    with pytest.raises(ProviderRefusal) as err:
        provider.send(_bundle(), 1.0)
    assert err.value.status == 429
    with pytest.raises(ProviderTimeout):
        provider.send(_bundle(), 1.0)
    with pytest.raises(ProviderRefusal):
        provider.send(_bundle(), 1.0)  # malformed body


# ------------------------------------------------------------------- gateway

def test_gateway_records_calls():
    records = []
    gateway = queue_gateway('{"x": 1}')
    gateway.recorded(records.append).call(
        AgentId.DIALOGUE_SUMMARIZER, {"history": "h"}
    )
    assert len(records) == 1
    record = records[0]
    assert record["kind"] == "agent_call"
    assert record["agent"] == "dialogue_summarizer"
    assert record["level"] == 2
    assert record["reply"] == '{"x": 1}'
    assert len(record["fingerprint"]) == 16


def test_gateway_level_override_only_when_supported():
    provider = QueueProvider("a", "b")
    gateway = Gateway(provider, level_override=3)
    gateway.call(AgentId.STATE_DETECTOR, _detector_bindings())
    assert provider.bundles[0].level == 3
    # conversation manager supports 3 too
    gateway.call(AgentId.CONVERSATION_MANAGER, _cm_bindings())
    assert provider.bundles[1].level == 3


def test_gateway_override_falls_back_to_default():
    provider = QueueProvider("a")
    gateway = Gateway(provider, level_override=5)  # detector tops out at 3
    gateway.call(AgentId.STATE_DETECTOR, _detector_bindings())
    assert provider.bundles[0].level == 2


def test_gateway_explicit_level_wins():
    provider = QueueProvider("a")
    gateway = Gateway(provider, level_override=3)
    gateway.call(AgentId.STATE_DETECTOR, _detector_bindings(), level=0)
    assert provider.bundles[0].level == 0


def test_gateway_directive_suffix_lands_in_bundle():
    provider = QueueProvider("a")
    Gateway(provider).call(
        AgentId.DIALOGUE_SUMMARIZER, {"history": "h"}, directive_suffix="EXTRA-RULE"
    )
    assert provider.bundles[0].directive.endswith("EXTRA-RULE")


def _detector_bindings():
    return {"context": "", "conversation state": "data_visualization", "user input": "hi"}


def _cm_bindings():
    return {
        "context": "",
        "state": "data_visualization",
        "input": "hi",
        "intent": "chitchat",
        "microprocess": "none",
        "mp_resp": "",
    }


def test_default_registry_is_shared():
    assert default_registry() is default_registry()
