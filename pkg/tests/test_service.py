"""HTTP facade: payload shapes, status-code mapping, auth, persistence."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from convds.config import Settings
from convds.engine import Engine
from convds.gateway import Gateway, ScriptedProvider
from convds.petel.expression import parse_petel
from convds.pipeline.backends import BuiltinBaselineBackend, MethodResult, TrainResponse
from convds.results import summarize_results
from convds.service import create_app
from convds.service.store import SessionStore

from conftest import FLIGHTS, QueueProvider, queue_gateway

_CSV = (FLIGHTS / "toy.csv").read_bytes()

_SUMMARIZER_REPLY = json.dumps(
    {
        "summary": "Twelve flights with delay severity labels.",
        "columns": [{"name": "delay_severity", "description": "mild or severe"}],
        "row": "F001 left JFK in a storm and ran 120 minutes late.",
        "trend": "Bad weather rows show the longest delays.",
    }
)
_SUGGESTOR_REPLY = (
    "You could frame this as classification of mild versus severe delays. "
    "For example predict delay_severity from the schedule. "
    "Alternatively regression can predict the delay in minutes."
)


def _detector(intent, current, proposed):
    return json.dumps({"intent": intent, "current_state": current, "next_state": proposed})


def _build(tmp_path, *replies, auth_token="", gateway=None):
    gateway = gateway or queue_gateway(*replies)
    engine = Engine(gateway, backend=BuiltinBaselineBackend(), seed=0)
    settings = Settings(data_dir=str(tmp_path), auth_token=auth_token)
    store = SessionStore(engine, data_dir=tmp_path)
    app = create_app(settings=settings, engine=engine, store=store)
    return TestClient(app), store


def _create(client):
    response = client.post("/v1/sessions")
    assert response.status_code == 200
    return response.json()["session_id"]


def test_create_session_payload_and_log(tmp_path):
    client, store = _build(tmp_path)
    body = client.post("/v1/sessions").json()
    assert set(body) == {"session_id", "state"}
    assert body["state"] == "data_visualization"
    log = tmp_path / f"{body['session_id']}.jsonl"
    assert log.exists()
    first = json.loads(log.read_text().splitlines()[0])
    assert first["kind"] == "session_created"
    assert first["session_id"] == body["session_id"]


def test_unknown_session_is_404(tmp_path):
    client, _ = _build(tmp_path)
    response = client.post("/v1/sessions/nope/messages", json={"text": "hi"})
    assert response.status_code == 404
    assert "error" in response.json()


def test_upload_dataset_payload(tmp_path):
    client, _ = _build(tmp_path, _SUMMARIZER_REPLY, _SUGGESTOR_REPLY)
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/dataset?name=flights", content=_CSV)
    assert response.status_code == 200
    body = response.json()
    assert body["reply"].startswith(
        "Hello, I am your data science assistant. I have processed the dataset"
    )
    assert body["summary"]["summary"] == "Twelve flights with delay severity labels."
    assert body["summary"]["columns"] == [
        {"name": "delay_severity", "description": "mild or severe"}
    ]
    assert [s["task"] for s in body["suggestions"]] == ["classification", "regression"]
    assert body["state"] == "data_visualization"


def test_upload_invalid_csv_is_422(tmp_path):
    client, _ = _build(tmp_path)
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/dataset", content=b"")
    assert response.status_code == 422


def test_message_payload_and_progress(tmp_path):
    client, _ = _build(
        tmp_path,
        _detector("chitchat", "data_visualization", "data_visualization"),
        "Hello! Upload a CSV to get going.",
    )
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/messages", json={"text": "hi"})
    assert response.status_code == 200
    body = response.json()
    assert body["reply"] == "Hello! Upload a CSV to get going."
    assert body["state"] == "data_visualization"
    assert body["petel_progress"] == {"filled": [], "missing": []}


def test_message_with_formulated_task_reports_progress(tmp_path):
    client, store = _build(
        tmp_path,
        _detector("chitchat", "task_formulation", "task_formulation"),
        "Sure thing.",
    )
    sid = _create(client)
    stored = store.get(sid)
    stored.session.petel = parse_petel(
        '{"problem_type": "classification", "target_variable": "delay_severity"}'
    )
    from convds.dialogue.states import DialogueState

    stored.session.state = DialogueState.TASK_FORMULATION
    body = client.post(f"/v1/sessions/{sid}/messages", json={"text": "ok"}).json()
    assert "target_variable" in body["petel_progress"]["filled"]
    assert "features" in body["petel_progress"]["missing"]


def test_empty_message_is_422(tmp_path):
    client, _ = _build(tmp_path)
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/messages", json={"text": "   "})
    assert response.status_code == 422


def test_missing_text_field_is_422(tmp_path):
    client, _ = _build(tmp_path)
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/messages", json={})
    assert response.status_code == 422


def test_question_without_dataset_is_409(tmp_path):
    client, _ = _build(
        tmp_path,
        _detector("get_dataset_info", "data_visualization", "data_visualization"),
    )
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/messages", json={"text": "describe the data"})
    assert response.status_code == 409


def test_dataset_reupload_after_formulation_starts_is_409(tmp_path):
    client, store = _build(tmp_path, _SUMMARIZER_REPLY, _SUGGESTOR_REPLY)
    sid = _create(client)
    assert client.post(f"/v1/sessions/{sid}/dataset", content=_CSV).status_code == 200
    stored = store.get(sid)
    stored.session.petel = parse_petel('{"problem_type": "classification"}')
    response = client.post(f"/v1/sessions/{sid}/dataset", content=_CSV)
    assert response.status_code == 409


def test_provider_transport_failure_is_502(tmp_path):
    client, _ = _build(tmp_path, gateway=Gateway(ScriptedProvider([])))
    sid = _create(client)
    response = client.post(f"/v1/sessions/{sid}/messages", json={"text": "hello"})
    assert response.status_code == 502
    assert "error" in response.json()


def test_results_before_training_is_409(tmp_path):
    client, _ = _build(tmp_path)
    sid = _create(client)
    response = client.get(f"/v1/sessions/{sid}/results")
    assert response.status_code == 409


def test_results_payload_shape(tmp_path):
    client, store = _build(tmp_path)
    sid = _create(client)
    petel = parse_petel((FLIGHTS / "listing1_petel.json").read_text(encoding="utf-8"))
    response = TrainResponse(
        request_id="r1",
        per_method={
            "naive_bayes": MethodResult(status="ok", metrics={"accuracy": 0.7}),
            "svm_classifier": MethodResult(status="failed", metrics={}, message="diverged"),
        },
    )
    store.get(sid).session.results = summarize_results(response, petel)
    body = client.get(f"/v1/sessions/{sid}/results").json()
    assert body["recommended"] == "naive_bayes"
    assert body["ranking"] == ["naive_bayes"]
    assert body["ranked_by"] == "accuracy"
    statuses = {m["method"]: m["status"] for m in body["methods"]}
    assert statuses == {"naive_bayes": "ok", "svm_classifier": "failed"}


def test_session_record_shape(tmp_path):
    client, _ = _build(tmp_path)
    sid = _create(client)
    body = client.get(f"/v1/sessions/{sid}").json()
    assert body["session_id"] == sid
    assert body["state"] == "data_visualization"
    assert body["dataset"] is None
    assert body["petel"] is None
    assert body["turn_count"] == 0
    assert body["snapshot"]["state"] == "data_visualization"


def test_auth_token_enforced(tmp_path):
    client, _ = _build(tmp_path, auth_token="sekrit")
    assert client.post("/v1/sessions").status_code == 401
    bad = client.post("/v1/sessions", headers={"Authorization": "Bearer wrong"})
    assert bad.status_code == 401
    good = client.post("/v1/sessions", headers={"Authorization": "Bearer sekrit"})
    assert good.status_code == 200


def test_cors_headers_present(tmp_path):
    client, _ = _build(tmp_path)
    response = client.post("/v1/sessions", headers={"Origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") == "*"


def test_turns_are_persisted_to_jsonl(tmp_path):
    client, _ = _build(
        tmp_path,
        _detector("chitchat", "data_visualization", "data_visualization"),
        "Hi there!",
    )
    sid = _create(client)
    client.post(f"/v1/sessions/{sid}/messages", json={"text": "hello"})
    lines = [json.loads(l) for l in (tmp_path / f"{sid}.jsonl").read_text().splitlines()]
    kinds = [l["kind"] for l in lines]
    assert kinds[0] == "session_created"
    assert "utterance" in kinds
    assert "agent_call" in kinds
    assert kinds[-1] == "state_change"
