"""Training backends: the in-process baseline and the HTTP wire client."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Protocol

import httpx

from convds.errors import BackendUnreachable, ProtocolError
from convds.petel.schema import KNOWN_METHODS, MlTask
from convds.pipeline.request import CANONICAL_METRICS, TrainRequest


class BackendHandle(Protocol):
    def train(self, request: dict, timeout: float) -> dict: ...

    def capabilities(self) -> dict: ...


@dataclass(frozen=True)
class MethodResult:
    status: str  # ok | failed
    metrics: Mapping[str, object]
    message: str = ""


@dataclass(frozen=True)
class TrainResponse:
    request_id: str
    per_method: Mapping[str, MethodResult]
    wall_time_s: Mapping[str, float] = field(default_factory=dict)


def _majority_label(y: list[float]) -> float:
    counts = Counter(y).most_common()
    counts.sort(key=lambda kv: (-kv[1], kv[0]))
    return counts[0][0]


def _classification_metrics(y: list[float], predicted: float, wanted: list[str]) -> dict:
    n = len(y)
    classes = sorted(set(y))
    out: dict = {}
    for metric in wanted:
        if metric == "accuracy":
            out["accuracy"] = sum(1 for v in y if v == predicted) / n
        elif metric in ("precision", "recall", "f1_score"):
            per_class = []
            for c in classes:
                support = sum(1 for v in y if v == c)
                if c == predicted:
                    precision = support / n
                    recall = 1.0
                else:
                    precision = 0.0
                    recall = 0.0
                f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
                per_class.append({"precision": precision, "recall": recall, "f1_score": f1}[metric])
            out[metric] = sum(per_class) / len(per_class)
        elif metric == "confusion_matrix":
            out["confusion_matrix"] = [
                [sum(1 for v in y if v == true and predicted == pred) for pred in classes]
                for true in classes
            ]
        elif metric in ("mse", "mae", "r2"):
            out[metric] = _regression_value(y, metric)
    return out


def _regression_value(y: list[float], metric: str) -> float:
    mean = sum(y) / len(y)
    if metric == "mse":
        return sum((v - mean) ** 2 for v in y) / len(y)
    if metric == "mae":
        return sum(abs(v - mean) for v in y) / len(y)
    return 0.0  # r2 of the mean predictor


def _regression_metrics(y: list[float], wanted: list[str]) -> dict:
    return {m: _regression_value(y, m) for m in wanted if m in ("mse", "mae", "r2")}


class BuiltinBaselineBackend:
    """Majority-class (or mean) baseline that answers every requested method.

    Pure in the matrix: no randomness, no wall-clock in the payload, so the
    same request always yields the identical response.
    """

    def train(self, request: dict, timeout: float = 0.0) -> dict:
        task = request["task"]
        y = [float(v) for v in request["data"]["y"]]
        metrics_wanted = list(request["metrics"])
        if not y:
            raise ProtocolError("empty training vector")

        if task == "regression":
            metrics = _regression_metrics(y, metrics_wanted)
            baseline_name = "mean_baseline"
            note = "mean baseline standing in for"
        else:
            majority = _majority_label(y)
            metrics = _classification_metrics(y, majority, metrics_wanted)
            baseline_name = "majority_class_baseline"
            note = "majority-class baseline standing in for"

        per_method = {
            method: {"status": "ok", "metrics": metrics, "message": f"{note} {method}"}
            for method in request["methods"]
        }
        per_method[baseline_name] = {"status": "ok", "metrics": metrics, "message": "baseline"}
        return {
            "request_id": request.get("request_id", ""),
            "per_method": per_method,
            "wall_time_s": {name: 0.0 for name in per_method},
        }

    def capabilities(self) -> dict:
        methods = sorted({m for names in KNOWN_METHODS.values() for m in names})
        return {
            "methods": methods + ["majority_class_baseline", "mean_baseline"],
            "metrics": list(CANONICAL_METRICS),
        }


class HttpBackend:
    """Client for workers speaking the train/capabilities wire protocol."""

    def __init__(self, base_url: str, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def train(self, request: dict, timeout: float | None = None) -> dict:
        try:
            response = httpx.post(
                f"{self.base_url}/v1/train",
                json=request,
                timeout=timeout or self.timeout,
            )
        except httpx.TimeoutException as exc:
            raise BackendUnreachable(f"backend timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise BackendUnreachable(f"backend unreachable: {exc}") from exc
        if response.status_code // 100 != 2:
            raise ProtocolError(f"backend returned {response.status_code}: {response.text[:200]}")
        try:
            return response.json()
        except ValueError as exc:
            raise ProtocolError(f"backend reply is not JSON: {exc}") from exc

    def capabilities(self) -> dict:
        try:
            response = httpx.get(f"{self.base_url}/v1/capabilities", timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise BackendUnreachable(f"backend unreachable: {exc}") from exc
        if response.status_code // 100 != 2:
            raise ProtocolError(f"backend returned {response.status_code}")
        return response.json()


def dispatch(request: TrainRequest, backend: BackendHandle, timeout: float = 60.0) -> TrainResponse:
    """Send the request and validate that every method got an answer."""
    raw = backend.train(request.to_wire(), timeout)
    if not isinstance(raw, dict) or not isinstance(raw.get("per_method"), dict):
        raise ProtocolError("response missing per_method map")
    echoed = raw.get("request_id")
    if echoed not in (None, "", request.request_id):
        raise ProtocolError(f"request_id mismatch: sent {request.request_id}, got {echoed}")

    per_method: dict[str, MethodResult] = {}
    for name, entry in raw["per_method"].items():
        if not isinstance(entry, dict) or entry.get("status") not in ("ok", "failed"):
            raise ProtocolError(f"malformed method entry for {name!r}")
        metrics = entry.get("metrics", {})
        if not isinstance(metrics, dict):
            raise ProtocolError(f"metrics for {name!r} is not an object")
        per_method[name] = MethodResult(
            status=entry["status"], metrics=metrics, message=str(entry.get("message", ""))
        )

    missing = [m for m in request.methods if m not in per_method]
    if missing:
        raise ProtocolError(f"response is missing methods: {missing}")

    wall = raw.get("wall_time_s", {})
    if not isinstance(wall, dict):
        wall = {}
    return TrainResponse(
        request_id=request.request_id,
        per_method=per_method,
        wall_time_s={str(k): float(v) for k, v in wall.items()},
    )
