/** Drag-drop CSV upload, the dataset summary card, and clickable suggestions. */

import type { DatasetSummary, TaskSuggestion } from "../types";

export interface DatasetPanel {
  el: HTMLElement;
  showSummary(summary: DatasetSummary | null): void;
  showSuggestions(suggestions: TaskSuggestion[]): void;
}

export interface DatasetPanelHooks {
  onUpload(name: string, csv: string): void;
  onSuggestion(text: string): void;
}

function readFile(file: File, hooks: DatasetPanelHooks): void {
  const reader = new FileReader();
  reader.onload = () => hooks.onUpload(file.name.replace(/\.csv$/i, ""), String(reader.result ?? ""));
  reader.readAsText(file);
}

export function createDatasetPanel(hooks: DatasetPanelHooks): DatasetPanel {
  const el = document.createElement("section");
  el.className = "dataset-panel";

  const title = document.createElement("h2");
  title.textContent = "Dataset";

  const drop = document.createElement("div");
  drop.className = "drop-zone";
  drop.textContent = "Drop a CSV here, or ";
  const picker = document.createElement("input");
  picker.type = "file";
  picker.accept = ".csv,text/csv";
  picker.setAttribute("aria-label", "choose CSV file");
  drop.appendChild(picker);

  drop.addEventListener("dragover", (event) => {
    event.preventDefault();
    drop.classList.add("drag-active");
  });
  drop.addEventListener("dragleave", () => drop.classList.remove("drag-active"));
  drop.addEventListener("drop", (event) => {
    event.preventDefault();
    drop.classList.remove("drag-active");
    const file = (event as DragEvent).dataTransfer?.files?.[0];
    if (file) {
      readFile(file, hooks);
    }
  });
  picker.addEventListener("change", () => {
    const file = picker.files?.[0];
    if (file) {
      readFile(file, hooks);
    }
  });

  const card = document.createElement("div");
  card.className = "summary-card";
  card.hidden = true;

  const suggestionsBox = document.createElement("div");
  suggestionsBox.className = "suggestions";
  suggestionsBox.hidden = true;

  el.append(title, drop, card, suggestionsBox);

  return {
    el,
    showSummary(summary) {
      card.hidden = summary === null;
      card.replaceChildren();
      if (!summary) {
        return;
      }
      const text = document.createElement("p");
      text.className = "summary-text";
      text.textContent = summary.summary;

      const columns = document.createElement("dl");
      columns.className = "summary-columns";
      for (const column of summary.columns) {
        const term = document.createElement("dt");
        term.textContent = column.name;
        const detail = document.createElement("dd");
        detail.textContent = column.description;
        columns.append(term, detail);
      }

      const row = document.createElement("p");
      row.className = "summary-row";
      row.textContent = summary.row ? `Sample row: ${summary.row}` : "";

      const trend = document.createElement("p");
      trend.className = "summary-trend";
      trend.textContent = summary.trend ? `Trend: ${summary.trend}` : "";

      card.append(text, columns, row, trend);
    },
    showSuggestions(suggestions) {
      suggestionsBox.hidden = suggestions.length === 0;
      suggestionsBox.replaceChildren();
      if (suggestions.length === 0) {
        return;
      }
      const heading = document.createElement("h3");
      heading.textContent = "Suggested tasks";
      suggestionsBox.appendChild(heading);
      for (const suggestion of suggestions) {
        const button = document.createElement("button");
        button.type = "button";
        button.className = "suggestion";
        button.dataset.task = suggestion.task;
        button.textContent = suggestion.rationale;
        button.addEventListener("click", () => hooks.onSuggestion(suggestion.rationale));
        suggestionsBox.appendChild(button);
      }
    },
  };
}
