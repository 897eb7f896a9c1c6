"""Estimator registry and per-method training runs.

Every method maps 1:1 to a scikit-learn estimator with default
hyperparameters; the only injected argument is ``random_state`` (where the
estimator accepts one) so that a request is reproducible end to end.
"""

from __future__ import annotations

import hashlib

import numpy as np
from sklearn.ensemble import (
    GradientBoostingClassifier,
    GradientBoostingRegressor,
    RandomForestClassifier,
    RandomForestRegressor,
)
from sklearn.linear_model import Lasso, LinearRegression, LogisticRegression, Ridge
from sklearn.metrics import (
    accuracy_score,
    confusion_matrix,
    f1_score,
    mean_absolute_error,
    mean_squared_error,
    precision_score,
    r2_score,
    recall_score,
)
from sklearn.model_selection import KFold, StratifiedKFold, cross_val_predict, train_test_split
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier, KNeighborsRegressor
from sklearn.svm import SVC, SVR
from sklearn.tree import DecisionTreeClassifier, DecisionTreeRegressor

SUPPORTED_METRICS = (
    "accuracy",
    "precision",
    "recall",
    "f1_score",
    "confusion_matrix",
    "mse",
    "mae",
    "r2",
)

# method name -> (task, estimator factory taking the derived seed)
_REGISTRY = {
    "logistic_regression": ("classification", lambda seed: LogisticRegression(random_state=seed)),
    "decision_tree_classifier": (
        "classification",
        lambda seed: DecisionTreeClassifier(random_state=seed),
    ),
    "random_forest_classifier": (
        "classification",
        lambda seed: RandomForestClassifier(random_state=seed),
    ),
    "svm_classifier": ("classification", lambda seed: SVC(random_state=seed)),
    "knn_classifier": ("classification", lambda seed: KNeighborsClassifier()),
    "xgboost_classifier": (
        "classification",
        lambda seed: GradientBoostingClassifier(random_state=seed),
    ),
    "naive_bayes": ("classification", lambda seed: GaussianNB()),
    "linear_regression": ("regression", lambda seed: LinearRegression()),
    "ridge": ("regression", lambda seed: Ridge(random_state=seed)),
    "lasso": ("regression", lambda seed: Lasso(random_state=seed)),
    "decision_tree_regressor": ("regression", lambda seed: DecisionTreeRegressor(random_state=seed)),
    "random_forest_regressor": (
        "regression",
        lambda seed: RandomForestRegressor(random_state=seed),
    ),
    "svr": ("regression", lambda seed: SVR()),
    "knn_regressor": ("regression", lambda seed: KNeighborsRegressor()),
    "gradient_boosting_regressor": (
        "regression",
        lambda seed: GradientBoostingRegressor(random_state=seed),
    ),
}

SUBSTITUTION_NOTICES = (
    "xgboost_classifier is served by sklearn.ensemble.GradientBoostingClassifier "
    "(gradient-boosting substitution; no xgboost dependency)",
)


def supported_methods() -> list[str]:
    return sorted(_REGISTRY)


def method_task(name: str) -> str | None:
    entry = _REGISTRY.get(name)
    return entry[0] if entry else None


def derive_seed(request_id: str) -> int:
    """Stable 32-bit seed from the request id, identical across processes."""
    digest = hashlib.sha256(request_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def _compute_metric(name: str, y_true: np.ndarray, y_pred: np.ndarray, labels: np.ndarray):
    if name == "accuracy":
        return float(accuracy_score(y_true, y_pred))
    if name == "precision":
        return float(precision_score(y_true, y_pred, average="macro", zero_division=0))
    if name == "recall":
        return float(recall_score(y_true, y_pred, average="macro", zero_division=0))
    if name == "f1_score":
        return float(f1_score(y_true, y_pred, average="macro", zero_division=0))
    if name == "confusion_matrix":
        return confusion_matrix(y_true, y_pred, labels=labels).astype(int).tolist()
    if name == "mse":
        return float(mean_squared_error(y_true, y_pred))
    if name == "mae":
        return float(mean_absolute_error(y_true, y_pred))
    if name == "r2":
        return float(r2_score(y_true, y_pred))
    raise ValueError(f"unsupported metric: {name!r}")


def run_method(
    method: str,
    task: str,
    x: np.ndarray,
    y: np.ndarray,
    validation: dict,
    metrics: list[str],
    seed: int,
) -> dict:
    """Train one method with the requested validation; raises on any problem.

    Cross-validation predicts every sample exactly once across folds, so an
    aggregated confusion matrix's cells sum to the full sample count; holdout
    evaluates the held-out fraction only.
    """
    estimator = _REGISTRY[method][1](seed)
    if validation["kind"] == "cross_validation":
        folds = int(validation.get("folds", 5))
        if task == "classification":
            splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
        else:
            splitter = KFold(n_splits=folds, shuffle=True, random_state=seed)
        y_pred = cross_val_predict(estimator, x, y, cv=splitter)
        y_true = y
    else:
        split = float(validation.get("split", 0.8))
        stratify = y if task == "classification" else None
        x_train, x_eval, y_train, y_true = train_test_split(
            x, y, train_size=split, random_state=seed, stratify=stratify
        )
        estimator.fit(x_train, y_train)
        y_pred = estimator.predict(x_eval)

    labels = np.unique(y)
    return {name: _compute_metric(name, y_true, y_pred, labels) for name in metrics}
