"""Turn a filtered dataset plus attribute plan into a trainable matrix.

Numeric gaps take the column median, categorical gaps the mode; categorical
features are one-hot encoded over the categories observed here, in lexical
order. Outliers are deliberately left in place: outlier wishes ride along as
advisory requirement strings, they are not enforced here.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from convds.errors import DegenerateTarget, EmptyAfterFilter
from convds.pipeline.attributes import AttributePlan
from convds.tabular.dataset import KIND_NUMERIC, Dataset, as_float

REASON_ALL_MISSING = "all_missing"
REASON_CONSTANT = "constant"


@dataclass(frozen=True)
class PreparedMatrix:
    x: tuple[tuple[float, ...], ...]
    y: tuple[float, ...]
    columns: tuple[str, ...]
    encoding_map: Mapping[str, dict]
    row_index: tuple[int, ...]
    dropped: tuple[tuple[str, str], ...]
    target_classes: tuple[str, ...] = ()

    @property
    def row_count(self) -> int:
        return len(self.x)


def _mode(cells: list[str]) -> str:
    counts = Counter(cells).most_common()
    counts.sort(key=lambda kv: (-kv[1], kv[0]))
    return counts[0][0]


def prep_data(dataset: Dataset, plan: AttributePlan, task: str = "classification") -> PreparedMatrix:
    """Model-ready matrix; every output row maps back to an original row id."""
    if dataset.row_count == 0:
        raise EmptyAfterFilter("no rows left to prepare")

    target_idx = dataset.column_index(plan.target) if plan.target is not None else None

    # Rows lacking a target value cannot carry a label; they are excluded.
    keep = [
        i
        for i in range(dataset.row_count)
        if target_idx is None or dataset.rows[i][target_idx] is not None
    ]
    if not keep:
        raise EmptyAfterFilter("every row is missing the target value")

    dropped: list[tuple[str, str]] = []
    encoding_map: dict[str, dict] = {}
    feature_vectors: list[list[float]] = [[] for _ in keep]
    out_columns: list[str] = []

    for name in plan.feature_columns:
        idx = dataset.column_index(name)
        cells = [dataset.rows[i][idx] for i in keep]
        present = [c for c in cells if c is not None]
        if not present:
            dropped.append((name, REASON_ALL_MISSING))
            continue
        if len(set(present)) == 1:
            dropped.append((name, REASON_CONSTANT))
            continue

        if dataset.column_kind(name) == KIND_NUMERIC:
            numbers = [v for v in (as_float(c) for c in present) if v is not None]
            fill = statistics.median(numbers)
            encoding_map[name] = {"kind": "identity", "imputed_with": fill}
            out_columns.append(name)
            for vec, cell in zip(feature_vectors, cells):
                value = as_float(cell)
                vec.append(value if value is not None else fill)
        else:
            fill = _mode([str(c) for c in present])
            categories = sorted({str(c) for c in present})
            encoding_map[name] = {
                "kind": "one_hot",
                "categories": categories,
                "imputed_with": fill,
            }
            out_columns.extend(f"{name}={cat}" for cat in categories)
            for vec, cell in zip(feature_vectors, cells):
                value = str(cell) if cell is not None else fill
                vec.extend(1.0 if value == cat else 0.0 for cat in categories)

    target_classes: tuple[str, ...] = ()
    if target_idx is None:
        y = tuple(0.0 for _ in keep)
    else:
        raw_targets = [str(dataset.rows[i][target_idx]) for i in keep]
        if task == "regression":
            parsed = [as_float(t) for t in raw_targets]
            if any(v is None for v in parsed):
                raise DegenerateTarget(0)
            y = tuple(parsed)  # type: ignore[arg-type]
            encoding_map["__target__"] = {"kind": "identity"}
        else:
            classes = sorted(set(raw_targets))
            if len(classes) < 2:
                raise DegenerateTarget(len(classes))
            index = {c: float(i) for i, c in enumerate(classes)}
            y = tuple(index[t] for t in raw_targets)
            target_classes = tuple(classes)
            encoding_map["__target__"] = {"kind": "label", "classes": classes}

    return PreparedMatrix(
        x=tuple(tuple(vec) for vec in feature_vectors),
        y=y,
        columns=tuple(out_columns),
        encoding_map=encoding_map,
        row_index=tuple(dataset.row_ids[i] for i in keep),
        dropped=tuple(dropped),
        target_classes=target_classes,
    )
