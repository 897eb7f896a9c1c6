"""Conjunctive row filtering against expression data_filters."""

from __future__ import annotations

from typing import Sequence

from convds.errors import IncompatibleCondition
from convds.petel.expression import FilterSpec
from convds.pipeline.attributes import resolve_column
from convds.tabular.dataset import KIND_NUMERIC, Dataset, as_float

_ORDER_CONDITIONS = frozenset({"greater_than", "less_than", "greater_equal", "less_equal", "between"})


def _require_number(value, column: str, condition: str) -> float:
    parsed = as_float(value)
    if parsed is None:
        raise IncompatibleCondition(
            column, condition, f"numeric column needs a numeric value, got {value!r}"
        )
    return parsed


def _numeric_predicate(spec: FilterSpec, column: str):
    cond = spec.condition
    if cond == "between":
        low = _require_number(spec.value[0], column, cond)
        high = _require_number(spec.value[1], column, cond)
        if low > high:
            raise IncompatibleCondition(column, cond, f"between bounds reversed: {low} > {high}")
        return lambda x: low <= x <= high
    if cond == "in":
        values = spec.value if isinstance(spec.value, list) else [spec.value]
        allowed = {_require_number(v, column, cond) for v in values}
        return lambda x: x in allowed
    bound = _require_number(spec.value, column, cond)
    return {
        "equals": lambda x: x == bound,
        "not_equals": lambda x: x != bound,
        "greater_than": lambda x: x > bound,
        "less_than": lambda x: x < bound,
        "greater_equal": lambda x: x >= bound,
        "less_equal": lambda x: x <= bound,
    }[cond]


def _lexical_predicate(spec: FilterSpec, column: str):
    cond = spec.condition
    if cond in _ORDER_CONDITIONS:
        raise IncompatibleCondition(column, cond, "order comparisons need a numeric column")
    if cond == "in":
        values = spec.value if isinstance(spec.value, list) else [spec.value]
        allowed = {str(v) for v in values}
        return lambda cell: cell in allowed
    wanted = str(spec.value)
    if cond == "equals":
        return lambda cell: cell == wanted
    return lambda cell: cell != wanted  # not_equals


def apply_filters(dataset: Dataset, filters: Sequence[FilterSpec]) -> Dataset:
    """Rows satisfying every filter; rows missing a filtered cell are excluded."""
    if not filters:
        return dataset

    compiled = []
    for spec in filters:
        column = resolve_column(spec.column, dataset)
        idx = dataset.column_index(column)
        numeric = dataset.column_kind(column) == KIND_NUMERIC
        predicate = _numeric_predicate(spec, column) if numeric else _lexical_predicate(spec, column)
        compiled.append((idx, numeric, predicate))

    kept_rows = []
    kept_ids = []
    for row, row_id in zip(dataset.rows, dataset.row_ids):
        ok = True
        for idx, numeric, predicate in compiled:
            cell = row[idx]
            if cell is None:
                ok = False
                break
            if numeric:
                value = as_float(cell)
                if value is None:  # stray unparseable cell in a numeric column
                    ok = False
                    break
                if not predicate(value):
                    ok = False
                    break
            elif not predicate(str(cell)):
                ok = False
                break
        if ok:
            kept_rows.append(row)
            kept_ids.append(row_id)

    return Dataset(
        name=dataset.name,
        columns=dataset.columns,
        rows=tuple(kept_rows),
        row_ids=tuple(kept_ids),
    )
