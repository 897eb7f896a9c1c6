"""Resolve expression slot names against real dataset columns."""

from __future__ import annotations

from dataclasses import dataclass, field

from convds.errors import TargetInFeatures, UnknownColumn, ValidationFailure
from convds.petel.expression import SKIPPED, Petel, is_complete
from convds.tabular.dataset import Dataset


def _squash(name: str) -> str:
    """Case/separator-insensitive form: spaces, underscores, hyphens ignored."""
    return "".join(ch for ch in str(name).lower() if ch not in " _-")


def _edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def resolve_column(name: str, dataset: Dataset) -> str:
    """The dataset column matching ``name``, or UnknownColumn with 3 near misses."""
    wanted = _squash(name)
    for col in dataset.column_names:
        if _squash(col) == wanted:
            return col
    ranked = sorted(
        dataset.column_names, key=lambda col: (_edit_distance(_squash(col), wanted), col)
    )
    raise UnknownColumn(name, candidates=ranked[:3])


@dataclass(frozen=True)
class AttributePlan:
    target: str | None
    feature_columns: tuple[str, ...]
    dropped: tuple[tuple[str, str], ...] = field(default_factory=tuple)


def _wants_all_columns(value) -> bool:
    if value is None or value == SKIPPED:
        return True
    if isinstance(value, str) and value.strip().lower() == "all":
        return True
    if isinstance(value, list) and len(value) == 1 and str(value[0]).strip().lower() == "all":
        return True
    return False


def petel_to_attributes(petel: Petel, dataset: Dataset) -> AttributePlan:
    """Resolve target and features by name; nothing is dropped silently."""
    complete, missing = is_complete(petel)
    if not complete:
        raise ValidationFailure(f"expression is incomplete (missing {missing})")

    target: str | None = None
    if petel.schema.has_slot("target_variable"):
        raw_target = petel.values.get("target_variable")
        if isinstance(raw_target, list):
            raw_target = raw_target[0] if raw_target else None
        if raw_target is not None:
            target = resolve_column(str(raw_target), dataset)

    raw_features = petel.values.get("features")
    if _wants_all_columns(raw_features):
        features = [c for c in dataset.column_names if c != target]
    else:
        features = [resolve_column(str(f), dataset) for f in raw_features]
        if target is not None and target in features:
            raise TargetInFeatures(f"target column {target!r} also listed as a feature")
    return AttributePlan(target=target, feature_columns=tuple(features))
