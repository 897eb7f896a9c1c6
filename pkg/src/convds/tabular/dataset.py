"""CSV ingestion and column-kind inference.

Cells are kept as raw strings; an empty field is a missing value (None).
Kinds are inferred from a sample of up to 1000 rows, in this precedence:
numeric, datetime, categorical, text.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime
from typing import IO, Iterable

from convds.errors import DecodeError, DuplicateColumn, EmptyInput, RaggedRow

KIND_NUMERIC = "numeric"
KIND_DATETIME = "datetime"
KIND_CATEGORICAL = "categorical"
KIND_TEXT = "text"

_SAMPLE_ROWS = 1000
_PARSE_THRESHOLD = 0.95


@dataclass(frozen=True)
class Column:
    name: str
    inferred_kind: str


@dataclass(frozen=True)
class Dataset:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[str | None, ...], ...]
    # Original line positions, carried through filtering for provenance.
    row_ids: tuple[int, ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def column_kind(self, name: str) -> str:
        return self.columns[self.column_index(name)].inferred_kind

    def column_cells(self, name: str) -> list[str | None]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]


def as_float(cell: object) -> float | None:
    """Numeric view of a cell; None when it does not parse."""
    if cell is None:
        return None
    if isinstance(cell, (int, float)) and not isinstance(cell, bool):
        return float(cell)
    text = str(cell).strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        return None


def _parses_datetime(text: str) -> bool:
    s = text.strip()
    if not s:
        return False
    try:
        date.fromisoformat(s)
        return True
    except ValueError:
        pass
    try:
        datetime.fromisoformat(s.replace("Z", "+00:00"))
        return True
    except ValueError:
        return False


def _infer_kind(cells: Iterable[str | None], total_rows: int) -> str:
    present = [c for c in cells if c is not None and str(c).strip() != ""]
    if present:
        numeric = sum(1 for c in present if as_float(c) is not None)
        if numeric / len(present) >= _PARSE_THRESHOLD:
            return KIND_NUMERIC
        dt = sum(1 for c in present if _parses_datetime(str(c)))
        if dt / len(present) >= _PARSE_THRESHOLD:
            return KIND_DATETIME
    distinct = len(set(present))
    if distinct <= max(20, int(0.05 * total_rows)):
        return KIND_CATEGORICAL
    return KIND_TEXT


def load_table(source: bytes | str | IO, name: str = "dataset") -> Dataset:
    """Parse RFC-4180-style CSV with a header row into a Dataset."""
    if isinstance(source, bytes):
        try:
            text = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"input is not valid UTF-8: {exc}") from exc
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        return load_table(raw if isinstance(raw, (bytes, str)) else str(raw), name=name)

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("no header row") from None
    header = [h.strip() for h in header]
    if not header or all(h == "" for h in header):
        raise EmptyInput("header row is empty")
    seen: set[str] = set()
    for h in header:
        if h in seen:
            raise DuplicateColumn(h)
        seen.add(h)

    width = len(header)
    rows: list[tuple[str | None, ...]] = []
    for record in reader:
        if not record:
            continue  # blank line
        if len(record) != width:
            raise RaggedRow(line=reader.line_num, expected=width, got=len(record))
        rows.append(tuple(cell if cell != "" else None for cell in record))

    sample = rows[:_SAMPLE_ROWS]
    columns = tuple(
        Column(name=header[i], inferred_kind=_infer_kind((r[i] for r in sample), len(sample)))
        for i in range(width)
    )
    return Dataset(name=name, columns=columns, rows=tuple(rows), row_ids=tuple(range(len(rows))))


def serialize_table(dataset: Dataset) -> str:
    """CSV text whose re-parse is structurally identical (missing -> empty field)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(dataset.column_names)
    for row in dataset.rows:
        writer.writerow(["" if cell is None else cell for cell in row])
    return out.getvalue()
