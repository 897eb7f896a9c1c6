"""Per-task slot schemas for the task expression language."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from convds.errors import InvalidTask

SCALAR = "scalar"
LIST = "list"
FILTER_LIST = "filter_list"


class MlTask(str, Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"
    CLUSTERING = "clustering"
    DIMENSIONALITY_REDUCTION = "dimensionality_reduction"
    ANOMALY_DETECTION = "anomaly_detection"
    TIME_SERIES = "time_series"

    def __str__(self) -> str:
        return self.value


_TASK_SYNONYMS = {
    "time series forecasting": MlTask.TIME_SERIES,
    "time series": MlTask.TIME_SERIES,
}


def parse_ml_task(text: object) -> MlTask:
    key = " ".join(str(text).strip().lower().replace("_", " ").split())
    for task in MlTask:
        if key == task.value.replace("_", " "):
            return task
    try:
        return _TASK_SYNONYMS[key]
    except KeyError:
        raise InvalidTask(f"unknown ML task: {text!r}") from None


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: str  # scalar | list | filter_list
    required: bool
    description: str
    fillable: bool = True


@dataclass(frozen=True)
class SlotSchema:
    task: MlTask
    slots: tuple[SlotSpec, ...]

    @property
    def fillable_slots(self) -> tuple[SlotSpec, ...]:
        return tuple(s for s in self.slots if s.fillable)

    @property
    def required_slots(self) -> tuple[SlotSpec, ...]:
        return tuple(s for s in self.fillable_slots if s.required)

    @property
    def optional_slots(self) -> tuple[SlotSpec, ...]:
        return tuple(s for s in self.fillable_slots if not s.required)

    @property
    def methods_slot(self) -> str | None:
        for s in self.slots:
            if s.name.endswith("_methods"):
                return s.name
        return None

    def slot(self, name: str) -> SlotSpec:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(name)

    def has_slot(self, name: str) -> bool:
        return any(s.name == name for s in self.slots)


def _problem_type() -> SlotSpec:
    return SlotSpec(
        name="problem_type",
        kind=SCALAR,
        required=True,
        description="the kind of ML task being formulated",
        fillable=False,
    )


_COMMON_TAIL = [
    SlotSpec("data_filters", FILTER_LIST, False, "row filters as column/condition/value triples"),
    SlotSpec("business_goals", LIST, False, "business outcomes the model should serve"),
    SlotSpec(
        "additional_requirements", LIST, False, "extra constraints such as robustness or fairness"
    ),
    SlotSpec("model_preferences", SCALAR, False, "preferred model quality, e.g. interpretable"),
]


def _supervised_schema(task: MlTask, methods_slot: str) -> SlotSchema:
    return SlotSchema(
        task=task,
        slots=(
            _problem_type(),
            SlotSpec("target_variable", SCALAR, True, "the column to predict"),
            SlotSpec("features", LIST, True, "input columns the model may use"),
            SlotSpec(
                "dataset_size", SCALAR, True, 'row count to use, or "Default" for all rows'
            ),
            SlotSpec("performance_metrics", LIST, True, "metrics to report, e.g. accuracy"),
            SlotSpec("validation_method", SCALAR, True, "how to validate, e.g. cross_validation"),
            SlotSpec(methods_slot, LIST, True, "candidate methods to train"),
            *_COMMON_TAIL,
        ),
    )


def _unsupervised_schema(task: MlTask, methods_slot: str) -> SlotSchema:
    return SlotSchema(
        task=task,
        slots=(
            _problem_type(),
            SlotSpec("features", LIST, True, "input columns the model may use"),
            SlotSpec(
                "dataset_size", SCALAR, True, 'row count to use, or "Default" for all rows'
            ),
            SlotSpec("performance_metrics", LIST, True, "metrics to report"),
            SlotSpec("validation_method", SCALAR, True, "how to validate results"),
            SlotSpec(methods_slot, LIST, True, "candidate methods to run"),
            *_COMMON_TAIL,
        ),
    )


def _time_series_schema() -> SlotSchema:
    # Slot order follows the blank forecasting object used in the prompt
    # demonstrations; target_variable is a list here (several series allowed).
    return SlotSchema(
        task=MlTask.TIME_SERIES,
        slots=(
            _problem_type(),
            SlotSpec("target_variable", LIST, True, "the series to forecast"),
            SlotSpec("forecast_horizon", SCALAR, True, "how far ahead to forecast"),
            SlotSpec("business_goals", LIST, False, "business outcomes the forecast should serve"),
            SlotSpec("granularity", SCALAR, True, "time step of the series, e.g. daily"),
            SlotSpec("features", LIST, True, "input columns the model may use"),
            SlotSpec("time_range", SCALAR, True, "the span of history to train on"),
            SlotSpec(
                "model_preferences", SCALAR, False, "preferred model quality, e.g. interpretable"
            ),
            SlotSpec("performance_metrics", LIST, True, "metrics to report, e.g. mae"),
            SlotSpec("validation_method", SCALAR, True, "how to validate, e.g. rolling origin"),
            SlotSpec(
                "additional_requirements", LIST, False, "extra constraints such as robustness"
            ),
            SlotSpec("time_series_methods", LIST, True, "candidate forecasting methods"),
            SlotSpec(
                "data_filters", FILTER_LIST, False, "row filters as column/condition/value triples"
            ),
        ),
    )


_SCHEMAS = {
    MlTask.CLASSIFICATION: _supervised_schema(MlTask.CLASSIFICATION, "classification_methods"),
    MlTask.REGRESSION: _supervised_schema(MlTask.REGRESSION, "regression_methods"),
    MlTask.CLUSTERING: _unsupervised_schema(MlTask.CLUSTERING, "clustering_methods"),
    MlTask.DIMENSIONALITY_REDUCTION: _unsupervised_schema(
        MlTask.DIMENSIONALITY_REDUCTION, "dimensionality_reduction_methods"
    ),
    MlTask.ANOMALY_DETECTION: _unsupervised_schema(
        MlTask.ANOMALY_DETECTION, "anomaly_detection_methods"
    ),
    MlTask.TIME_SERIES: _time_series_schema(),
}


def schema_for(task: MlTask | str) -> SlotSchema:
    return _SCHEMAS[parse_ml_task(task) if not isinstance(task, MlTask) else task]


# Methods each task's backend request may name; friendly spellings are
# normalized in the request builder.
KNOWN_METHODS: dict[MlTask, tuple[str, ...]] = {
    MlTask.CLASSIFICATION: (
        "logistic_regression",
        "decision_tree_classifier",
        "random_forest_classifier",
        "svm_classifier",
        "knn_classifier",
        "xgboost_classifier",
        "naive_bayes",
    ),
    MlTask.REGRESSION: (
        "linear_regression",
        "ridge",
        "lasso",
        "decision_tree_regressor",
        "random_forest_regressor",
        "svr",
        "knn_regressor",
        "gradient_boosting_regressor",
    ),
    MlTask.CLUSTERING: ("kmeans", "dbscan", "agglomerative"),
    MlTask.DIMENSIONALITY_REDUCTION: ("pca", "tsne", "umap"),
    MlTask.ANOMALY_DETECTION: ("isolation_forest", "one_class_svm", "local_outlier_factor"),
    MlTask.TIME_SERIES: ("arima", "exponential_smoothing", "prophet"),
}
