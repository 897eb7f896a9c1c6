"""Compiles a complete task expression against a dataset and runs training."""

from convds.pipeline.attributes import AttributePlan, petel_to_attributes, resolve_column
from convds.pipeline.filters import apply_filters
from convds.pipeline.prep import PreparedMatrix, prep_data
from convds.pipeline.request import TrainRequest, build_train_request, normalize_metric
from convds.pipeline.backends import (
    BuiltinBaselineBackend,
    HttpBackend,
    MethodResult,
    TrainResponse,
    dispatch,
)

__all__ = [
    "AttributePlan",
    "BuiltinBaselineBackend",
    "HttpBackend",
    "MethodResult",
    "PreparedMatrix",
    "TrainRequest",
    "TrainResponse",
    "apply_filters",
    "build_train_request",
    "dispatch",
    "normalize_metric",
    "petel_to_attributes",
    "prep_data",
    "resolve_column",
]
