"""Token-bounded condensation of a dataset for prompt inclusion.

Rendering format (documented for transcript stability): one header line and
sample rows with `|` separators, then a `# stats:` block with one line per
column. Deterministic for a fixed (dataset, budget, seed).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from convds.errors import EmptyDataset
from convds.tabular.dataset import KIND_NUMERIC, Dataset, as_float

DEFAULT_BUDGET_CHARS = 4000
MIN_BUDGET_CHARS = 500
_HEAD_ROWS = 5
_MAX_SAMPLE_ROWS = 45
_MISSING_TOKEN = ""


@dataclass(frozen=True)
class MiniDataset:
    header: tuple[str, ...]
    sample_rows: tuple[tuple[str | None, ...], ...]
    stats: Mapping[str, dict]
    rendered: str
    seed: int


def _column_stats(dataset: Dataset, name: str) -> dict:
    cells = dataset.column_cells(name)
    present = [c for c in cells if c is not None]
    total = len(cells)
    stats: dict = {
        "missing_fraction": round(1 - len(present) / total, 4) if total else 0.0,
        "distinct_count": len(set(present)),
    }
    kind = dataset.column_kind(name)
    if kind == KIND_NUMERIC:
        values = [v for v in (as_float(c) for c in present) if v is not None]
        if values:
            stats["min"] = min(values)
            stats["max"] = max(values)
    else:
        top = Counter(present).most_common()
        # Counter breaks frequency ties by insertion order; re-sort for determinism.
        top.sort(key=lambda kv: (-kv[1], kv[0]))
        stats["top_values"] = [v for v, _ in top[:3]]
    return stats


def _stat_line(name: str, kind: str, stats: dict) -> str:
    parts = [
        f"# {name}",
        f"kind={kind}",
        f"missing={stats['missing_fraction']}",
        f"distinct={stats['distinct_count']}",
    ]
    if "min" in stats:
        parts.append(f"min={stats['min']:g}")
        parts.append(f"max={stats['max']:g}")
    if stats.get("top_values"):
        parts.append("top3=" + ";".join(stats["top_values"]))
    return " ".join(parts)


def _render(header, rows, stat_lines) -> str:
    lines = ["|".join(header)]
    for row in rows:
        lines.append("|".join(_MISSING_TOKEN if c is None else str(c) for c in row))
    lines.append("# stats:")
    lines.extend(stat_lines)
    return "\n".join(lines)


def miniaturize(
    dataset: Dataset,
    budget_chars: int = DEFAULT_BUDGET_CHARS,
    seed: int = 0,
) -> MiniDataset:
    """First rows plus a seeded uniform sample, trimmed from the tail to budget."""
    if budget_chars < MIN_BUDGET_CHARS:
        raise ValueError(f"budget_chars must be >= {MIN_BUDGET_CHARS}, got {budget_chars}")
    if dataset.row_count == 0:
        raise EmptyDataset("cannot miniaturize a dataset with no rows")

    head = list(dataset.rows[:_HEAD_ROWS])
    pool = list(range(_HEAD_ROWS, dataset.row_count))
    rng = random.Random(seed)
    picked = sorted(rng.sample(pool, min(len(pool), _MAX_SAMPLE_ROWS)))
    rows = head + [dataset.rows[i] for i in picked]

    stats = {c.name: _column_stats(dataset, c.name) for c in dataset.columns}
    stat_lines = [
        _stat_line(c.name, c.inferred_kind, stats[c.name]) for c in dataset.columns
    ]

    rendered = _render(dataset.column_names, rows, stat_lines)
    while len(rendered) > budget_chars and rows:
        rows = rows[:-1]
        rendered = _render(dataset.column_names, rows, stat_lines)
    if len(rendered) > budget_chars:
        rendered = rendered[:budget_chars]

    return MiniDataset(
        header=dataset.column_names,
        sample_rows=tuple(rows),
        stats=stats,
        rendered=rendered,
        seed=seed,
    )
