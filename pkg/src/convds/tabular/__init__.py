"""Tabular data ingestion, condensation, and the dataset-facing micro-agents."""

from convds.tabular.dataset import Column, Dataset, as_float, load_table, serialize_table
from convds.tabular.miniature import MiniDataset, miniaturize
from convds.tabular.suggest import Suggestion, TaskSuggestion, suggest_tasks
from convds.tabular.summarize import ColumnNote, DatasetSummary, summarize_dataset

__all__ = [
    "Column",
    "ColumnNote",
    "Dataset",
    "DatasetSummary",
    "MiniDataset",
    "Suggestion",
    "TaskSuggestion",
    "as_float",
    "load_table",
    "miniaturize",
    "serialize_table",
    "suggest_tasks",
    "summarize_dataset",
]
