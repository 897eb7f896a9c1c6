"""Build the wire-format training request out of an expression and matrix."""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass

from convds.errors import UnknownMethod, UnknownMetric
from convds.petel.expression import SKIPPED, Petel
from convds.petel.schema import KNOWN_METHODS, MlTask
from convds.pipeline.prep import PreparedMatrix

log = logging.getLogger(__name__)

CANONICAL_METRICS = (
    "accuracy",
    "precision",
    "recall",
    "f1_score",
    "confusion_matrix",
    "mse",
    "mae",
    "r2",
)

_METRIC_SYNONYMS = {
    "accuracy": "accuracy",
    "precision": "precision",
    "recall": "recall",
    "f1": "f1_score",
    "f1 score": "f1_score",
    "f1_score": "f1_score",
    "f1score": "f1_score",
    "f-1": "f1_score",
    "f measure": "f1_score",
    "confusion matrix": "confusion_matrix",
    "confusion_matrix": "confusion_matrix",
    "mse": "mse",
    "mean squared error": "mse",
    "mean_squared_error": "mse",
    "mae": "mae",
    "mean absolute error": "mae",
    "mean_absolute_error": "mae",
    "r2": "r2",
    "r^2": "r2",
    "r squared": "r2",
    "r2 score": "r2",
    "r2_score": "r2",
}

_CV_FORMS = {
    "cross validation",
    "cross_validation",
    "k fold cross validation",
    "k_fold_cross_validation",
    "k-fold cross validation",
    "kfold",
    "k fold",
    "k_fold",
    "cv",
}
_HOLDOUT_FORMS = {"holdout", "hold out", "hold_out", "train test split", "train_test_split"}

DEFAULT_FOLDS = 5
DEFAULT_SPLIT = 0.8

# Friendly spellings per task, layered over the canonical method names.
_METHOD_SYNONYMS: dict[MlTask, dict[str, str]] = {
    MlTask.CLASSIFICATION: {
        "logistic regression": "logistic_regression",
        "decision tree": "decision_tree_classifier",
        "decision tree classifier": "decision_tree_classifier",
        "random forest": "random_forest_classifier",
        "random forest classifier": "random_forest_classifier",
        "svm": "svm_classifier",
        "svm classifier": "svm_classifier",
        "support vector machine": "svm_classifier",
        "knn": "knn_classifier",
        "knn classifier": "knn_classifier",
        "k nearest neighbors": "knn_classifier",
        "xgboost": "xgboost_classifier",
        "xgboost classifier": "xgboost_classifier",
        "naive bayes": "naive_bayes",
    },
    MlTask.REGRESSION: {
        "linear regression": "linear_regression",
        "decision tree regressor": "decision_tree_regressor",
        "random forest regressor": "random_forest_regressor",
        "gradient boosting": "gradient_boosting_regressor",
        "gradient boosting regressor": "gradient_boosting_regressor",
        "knn regressor": "knn_regressor",
    },
    MlTask.CLUSTERING: {"k means": "kmeans", "k-means": "kmeans"},
}


def normalize_metric(name: object) -> str:
    key = " ".join(str(name).strip().lower().split())
    try:
        return _METRIC_SYNONYMS[key]
    except KeyError:
        raise UnknownMetric(f"unknown metric: {name!r}") from None


def normalize_method(name: object, task: MlTask) -> str:
    canonical = KNOWN_METHODS.get(task, ())
    key = " ".join(str(name).strip().lower().replace("-", " ").replace("_", " ").split())
    underscored = key.replace(" ", "_")
    if underscored in canonical:
        return underscored
    mapped = _METHOD_SYNONYMS.get(task, {}).get(key)
    if mapped:
        return mapped
    raise UnknownMethod(f"unknown {task.value} method: {name!r}")


def normalize_validation(raw: object) -> dict:
    if raw is None or raw == SKIPPED:
        return {"kind": "cross_validation", "folds": DEFAULT_FOLDS}
    key = " ".join(str(raw).strip().lower().replace("-", " ").replace("_", " ").split())
    if key in {f.replace("-", " ").replace("_", " ") for f in _CV_FORMS}:
        return {"kind": "cross_validation", "folds": DEFAULT_FOLDS}
    if key in {f.replace("_", " ") for f in _HOLDOUT_FORMS}:
        return {"kind": "holdout", "split": DEFAULT_SPLIT}
    log.warning("unrecognized validation method %r; defaulting to cross_validation", raw)
    return {"kind": "cross_validation", "folds": DEFAULT_FOLDS}


@dataclass(frozen=True)
class TrainRequest:
    request_id: str
    task: MlTask
    methods: tuple[str, ...]
    metrics: tuple[str, ...]
    validation: dict
    columns: tuple[str, ...]
    x: tuple[tuple[float, ...], ...]
    y: tuple[float, ...]

    def to_wire(self) -> dict:
        return {
            "request_id": self.request_id,
            "task": self.task.value,
            "methods": list(self.methods),
            "metrics": list(self.metrics),
            "validation": dict(self.validation),
            "columns": list(self.columns),
            "data": {"x": [list(r) for r in self.x], "y": list(self.y)},
        }


def _dataset_size(petel: Petel) -> int | None:
    raw = petel.values.get("dataset_size")
    if raw is None or raw == SKIPPED:
        return None
    if isinstance(raw, str):
        if raw.strip().lower() == "default":
            return None
        if raw.strip().isdigit():
            return int(raw)
        return None
    if isinstance(raw, bool):
        return None
    if isinstance(raw, (int, float)):
        return int(raw)
    return None


def build_train_request(petel: Petel, matrix: PreparedMatrix, seed: int = 0) -> TrainRequest:
    """Deterministic for fixed inputs and seed, including any subsampling."""
    methods_slot = petel.schema.methods_slot
    raw_methods = petel.values.get(methods_slot) if methods_slot else None
    if not raw_methods or raw_methods == SKIPPED:
        raise UnknownMethod(f"no methods listed in slot {methods_slot!r}")
    methods = tuple(normalize_method(m, petel.problem_type) for m in raw_methods)

    raw_metrics = petel.values.get("performance_metrics") or []
    if raw_metrics == SKIPPED:
        raw_metrics = []
    metrics = tuple(normalize_metric(m) for m in raw_metrics)
    if not metrics:
        raise UnknownMetric("performance_metrics is empty")

    validation = normalize_validation(petel.values.get("validation_method"))

    x, y, row_index = matrix.x, matrix.y, matrix.row_index
    size = _dataset_size(petel)
    if size is not None and 0 < size < len(x):
        picked = sorted(random.Random(seed).sample(range(len(x)), size))
        x = tuple(x[i] for i in picked)
        y = tuple(y[i] for i in picked)
        row_index = tuple(row_index[i] for i in picked)

    payload = json.dumps(
        {
            "task": petel.problem_type.value,
            "methods": list(methods),
            "metrics": list(metrics),
            "validation": validation,
            "columns": list(matrix.columns),
            "x": [list(r) for r in x],
            "y": list(y),
        },
        sort_keys=True,
    )
    request_id = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    return TrainRequest(
        request_id=request_id,
        task=petel.problem_type,
        methods=methods,
        metrics=metrics,
        validation=validation,
        columns=matrix.columns,
        x=x,
        y=y,
    )
