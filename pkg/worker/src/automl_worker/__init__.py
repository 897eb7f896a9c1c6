"""Reference training worker speaking the train/capabilities wire protocol."""

from __future__ import annotations

import time

import numpy as np
from fastapi import FastAPI, HTTPException

from automl_worker.schemas import MethodEntry, TrainRequest, TrainResponse
from automl_worker.training import (
    SUBSTITUTION_NOTICES,
    SUPPORTED_METRICS,
    derive_seed,
    method_task,
    run_method,
    supported_methods,
)

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(title="automl-worker")

    @app.get("/v1/capabilities")
    def capabilities() -> dict:
        return {
            "methods": supported_methods(),
            "metrics": list(SUPPORTED_METRICS),
            "notices": list(SUBSTITUTION_NOTICES),
        }

    @app.post("/v1/train")
    def train(request: TrainRequest) -> TrainResponse:
        for method in request.methods:
            task = method_task(method)
            if task is None:
                raise HTTPException(status_code=400, detail=f"unknown method: {method!r}")
            if task != request.task:
                raise HTTPException(
                    status_code=400,
                    detail=f"method {method!r} is not available for task {request.task!r}",
                )
        for metric in request.metrics:
            if metric not in SUPPORTED_METRICS:
                raise HTTPException(status_code=400, detail=f"unknown metric: {metric!r}")

        seed = derive_seed(request.request_id)
        x = np.asarray(request.data.x, dtype=float)
        y = np.asarray(request.data.y, dtype=float)

        per_method: dict[str, MethodEntry] = {}
        wall_time_s: dict[str, float] = {}
        for method in request.methods:
            started = time.perf_counter()
            try:
                metrics = run_method(
                    method,
                    request.task,
                    x,
                    y,
                    request.validation.model_dump(),
                    request.metrics,
                    seed,
                )
                per_method[method] = MethodEntry(status="ok", metrics=metrics)
            except Exception as exc:  # independent jobs: one failure never aborts the rest
                per_method[method] = MethodEntry(status="failed", message=str(exc))
            wall_time_s[method] = time.perf_counter() - started

        return TrainResponse(
            request_id=request.request_id,
            per_method=per_method,
            wall_time_s=wall_time_s,
        )

    return app


app = create_app()
