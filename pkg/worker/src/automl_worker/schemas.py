"""Pydantic models for the train/capabilities wire protocol."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class Validation(BaseModel):
    kind: Literal["cross_validation", "holdout"]
    folds: int = Field(default=5, ge=2)
    split: float = Field(default=0.8, gt=0.0, lt=1.0)


class Payload(BaseModel):
    x: list[list[float]] = Field(min_length=1)
    y: list[float] = Field(min_length=1)

    @model_validator(mode="after")
    def _consistent_lengths(self) -> "Payload":
        if len(self.x) != len(self.y):
            raise ValueError(f"x has {len(self.x)} rows but y has {len(self.y)} values")
        widths = {len(row) for row in self.x}
        if len(widths) > 1:
            raise ValueError(f"rows of x have inconsistent widths: {sorted(widths)}")
        return self


class TrainRequest(BaseModel):
    request_id: str = ""
    task: str = Field(min_length=1)
    methods: list[str] = Field(min_length=1)
    metrics: list[str] = Field(min_length=1)
    validation: Validation
    columns: list[str] = Field(default_factory=list)
    data: Payload


class MethodEntry(BaseModel):
    status: Literal["ok", "failed"]
    metrics: dict[str, object] = Field(default_factory=dict)
    message: str = ""


class TrainResponse(BaseModel):
    request_id: str
    per_method: dict[str, MethodEntry]
    wall_time_s: dict[str, float]
