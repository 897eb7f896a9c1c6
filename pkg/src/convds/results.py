"""Ranking trained methods and rendering the outcome for the user."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from convds.errors import NoSuccessfulMethods
from convds.gateway import AgentId
from convds.petel.expression import SKIPPED, Petel
from convds.pipeline.backends import TrainResponse

# Lower is better for error metrics; everything else ranks descending.
_ASCENDING_METRICS = frozenset({"mse", "mae"})
_NON_SCALAR_METRICS = frozenset({"confusion_matrix"})

# Tie-break order when the user asked for interpretable models: most
# interpretable first. Methods absent from the table rank after all of these.
INTERPRETABILITY_ORDER = (
    "logistic_regression",
    "decision_tree_classifier",
    "naive_bayes",
    "knn_classifier",
    "svm_classifier",
    "random_forest_classifier",
    "xgboost_classifier",
)


@dataclass(frozen=True)
class MethodRow:
    method: str
    metrics: Mapping[str, object]
    status: str


@dataclass(frozen=True)
class ResultSummary:
    rows: tuple[MethodRow, ...]
    ranking: tuple[str, ...]
    recommended: str
    rationale: str
    ranked_by: str


def _ranking_metric(petel: Petel) -> str:
    metrics = petel.values.get("performance_metrics") or []
    if metrics == SKIPPED:
        metrics = []
    for name in metrics:
        if str(name) not in _NON_SCALAR_METRICS:
            return str(name)
    return "accuracy"


def _wants_interpretable(petel: Petel) -> bool:
    preference = petel.values.get("model_preferences")
    return preference is not None and "interpretable" in str(preference).lower()


def _declared_order(petel: Petel) -> list[str]:
    slot = petel.schema.methods_slot
    declared = petel.values.get(slot) if slot else None
    return list(declared) if isinstance(declared, list) else []


def summarize_results(response: TrainResponse, petel: Petel) -> ResultSummary:
    """Rank ok methods by the first scalar requested metric, with tie-breaks."""
    ok = [(name, r) for name, r in response.per_method.items() if r.status == "ok"]
    if not ok:
        raise NoSuccessfulMethods("every method failed")

    metric = _ranking_metric(petel)
    ascending = metric in _ASCENDING_METRICS
    declared = _declared_order(petel)
    interpretable = _wants_interpretable(petel)

    def tie_rank(name: str) -> int:
        if interpretable:
            try:
                return INTERPRETABILITY_ORDER.index(name)
            except ValueError:
                return len(INTERPRETABILITY_ORDER)
        try:
            return declared.index(name)
        except ValueError:
            return len(declared)

    def score(item: tuple[str, object]) -> tuple:
        name, result = item
        value = result.metrics.get(metric)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            primary = float(value) if ascending else -float(value)
            missing = 0
        else:
            primary = float("inf")
            missing = 1
        return (missing, primary, tie_rank(name), name)

    ranked = sorted(ok, key=score)
    ranking = tuple(name for name, _ in ranked)
    recommended = ranking[0]
    best_value = ranked[0][1].metrics.get(metric)

    rationale = f"Ranked by {metric} ({'lower' if ascending else 'higher'} is better); "
    rationale += f"{recommended} leads with {metric}={best_value}."
    runner_up = ranked[1] if len(ranked) > 1 else None
    if runner_up is not None and runner_up[1].metrics.get(metric) == best_value:
        if interpretable:
            rationale += " Tie broken toward the more interpretable model, as requested."
        else:
            rationale += " Tie broken by the order the methods were listed."

    rows = tuple(
        MethodRow(method=name, metrics=r.metrics, status=r.status)
        for name, r in response.per_method.items()
    )
    return ResultSummary(
        rows=rows,
        ranking=ranking,
        recommended=recommended,
        rationale=rationale,
        ranked_by=metric,
    )


def _scalar_metric_names(summary: ResultSummary) -> list[str]:
    names: list[str] = []
    for row in summary.rows:
        for key, value in row.metrics.items():
            if key in _NON_SCALAR_METRICS or key in names:
                continue
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                names.append(key)
    # ranking metric first, the rest in first-seen order
    if summary.ranked_by in names:
        names.remove(summary.ranked_by)
        names.insert(0, summary.ranked_by)
    return names


def _format_value(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.4f}".rstrip("0").rstrip(".")
    return str(value)


def template_results(summary: ResultSummary) -> str:
    """Deterministic table plus a recommendation line."""
    metric_names = _scalar_metric_names(summary)
    header = ["method", *metric_names, "status"]
    lines = [" | ".join(header)]
    ranked_first = list(summary.ranking) + [
        r.method for r in summary.rows if r.method not in summary.ranking
    ]
    by_name = {r.method: r for r in summary.rows}
    for name in ranked_first:
        row = by_name[name]
        cells = [name]
        for metric in metric_names:
            value = row.metrics.get(metric)
            cells.append(_format_value(value) if value is not None else "-")
        cells.append(row.status)
        lines.append(" | ".join(cells))
    for row in summary.rows:
        matrix = row.metrics.get("confusion_matrix")
        if matrix is not None:
            lines.append(f"confusion_matrix {row.method}: {matrix}")
    lines.append(f"Recommended: {summary.recommended} — {summary.rationale}")
    return "\n".join(lines)


def _mentions(text: str, token: str) -> bool:
    squash = lambda s: re.sub(r"[_\s]+", " ", s.lower())
    return squash(token) in squash(text)


def render_results(
    summary: ResultSummary,
    context: str = "",
    gateway=None,
    mode: str = "template",
    utterance: str = "",
) -> str:
    """Template text, optionally rewritten by the conversation manager.

    A polished rewrite that loses the recommended method name is discarded in
    favor of the template.
    """
    text = template_results(summary)
    if mode != "polished" or gateway is None:
        return text
    reply = gateway.call(
        AgentId.CONVERSATION_MANAGER,
        {
            "context": context or "",
            "state": "model_training",
            "input": utterance,
            "intent": "Problem execution",
            "microprocess": "result_summarizer",
            "mp_resp": text,
        },
    )
    if reply.strip() and _mentions(reply, summary.recommended):
        return reply.strip()
    return text
