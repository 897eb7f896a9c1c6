"""Task suggestion micro-agent: prose reply, keyword-anchored parsing."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from convds.errors import TooFewTasks
from convds.gateway import AgentId
from convds.petel.schema import MlTask
from convds.tabular.summarize import DatasetSummary

# Spellings scanned for in the reply, by canonical task. Word-bounded so
# "classification" inside "misclassification" does not count.
_TASK_PATTERNS = [
    (MlTask.CLASSIFICATION, r"classification"),
    (MlTask.REGRESSION, r"regression"),
    (MlTask.CLUSTERING, r"clustering"),
    (MlTask.DIMENSIONALITY_REDUCTION, r"dimensionality[ _]reduction"),
    (MlTask.ANOMALY_DETECTION, r"anomaly[ _]detection"),
    (MlTask.TIME_SERIES, r"time[ _]series"),
]


@dataclass(frozen=True)
class Suggestion:
    task: MlTask
    rationale: str
    example_formulation: str


@dataclass(frozen=True)
class TaskSuggestion:
    tasks: tuple[Suggestion, ...]


def render_summary(summary: DatasetSummary) -> str:
    """The {summary} binding: all four parts, compact JSON."""
    return json.dumps(
        {
            "summary": summary.summary,
            "columns": [{"name": c.name, "description": c.description} for c in summary.columns],
            "row": summary.row,
            "trend": summary.trend,
        }
    )


def _first_mentions(reply: str) -> list[tuple[int, MlTask]]:
    found: dict[MlTask, int] = {}
    for task, pattern in _TASK_PATTERNS:
        m = re.search(rf"\b{pattern}\b", reply, flags=re.IGNORECASE)
        if m and task not in found:
            found[task] = m.start()
    return sorted((pos, task) for task, pos in found.items())


def _parse_reply(reply: str) -> list[Suggestion]:
    mentions = _first_mentions(reply)
    suggestions = []
    for i, (pos, task) in enumerate(mentions):
        end = mentions[i + 1][0] if i + 1 < len(mentions) else len(reply)
        rationale = reply[pos:end].strip()
        example = ""
        m = re.search(r"[^.?!]*\bexample\b[^.?!]*[.?!]", rationale, flags=re.IGNORECASE)
        if m:
            example = m.group(0).strip()
        suggestions.append(Suggestion(task=task, rationale=rationale, example_formulation=example))
    return suggestions


def suggest_tasks(summary: DatasetSummary, gateway) -> TaskSuggestion:
    """At least two recognized tasks with rationales; one corrective retry."""
    bindings = {"summary": render_summary(summary)}
    reply = gateway.call(AgentId.TASK_SUGGESTOR, bindings)
    suggestions = _parse_reply(reply)
    if len(suggestions) < 2:
        suffix = (
            "The previous response named fewer than two of the allowed tasks. Suggest at "
            "least two, each by its exact name from the task list, with a rationale."
        )
        reply = gateway.call(AgentId.TASK_SUGGESTOR, bindings, directive_suffix=suffix)
        suggestions = _parse_reply(reply)
        if len(suggestions) < 2:
            raise TooFewTasks([s.task.value for s in suggestions])
    return TaskSuggestion(tasks=tuple(suggestions))
