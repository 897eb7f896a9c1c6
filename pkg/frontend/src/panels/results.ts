/** Per-method metric table with the recommended row highlighted. */

import type { ResultsPayload } from "../types";

export interface ResultsPanel {
  el: HTMLElement;
  update(results: ResultsPayload | null): void;
}

function formatValue(value: unknown): string {
  if (value === null || value === undefined) {
    return "-";
  }
  if (typeof value === "number") {
    const rounded = value.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
    return rounded === "" ? "0" : rounded;
  }
  if (Array.isArray(value)) {
    return JSON.stringify(value);
  }
  return String(value);
}

export function createResultsPanel(): ResultsPanel {
  const el = document.createElement("section");
  el.className = "results-panel";
  el.hidden = true;

  const title = document.createElement("h2");
  title.textContent = "Training results";

  const table = document.createElement("table");
  table.className = "results-table";

  const rationale = document.createElement("p");
  rationale.className = "results-rationale";

  el.append(title, table, rationale);

  return {
    el,
    update(results) {
      el.hidden = results === null;
      table.replaceChildren();
      rationale.textContent = "";
      if (!results) {
        return;
      }

      const metricNames: string[] = [];
      for (const row of results.methods) {
        for (const name of Object.keys(row.metrics)) {
          if (!metricNames.includes(name)) {
            metricNames.push(name);
          }
        }
      }

      const head = document.createElement("tr");
      for (const label of ["method", ...metricNames, "status"]) {
        const cell = document.createElement("th");
        cell.textContent = label;
        head.appendChild(cell);
      }
      table.appendChild(head);

      const byRank = [...results.methods].sort((a, b) => {
        const ra = results.ranking.indexOf(a.method);
        const rb = results.ranking.indexOf(b.method);
        return (ra === -1 ? results.ranking.length : ra) - (rb === -1 ? results.ranking.length : rb);
      });

      for (const row of byRank) {
        const tr = document.createElement("tr");
        tr.dataset.method = row.method;
        if (row.method === results.recommended) {
          tr.className = "recommended";
        }
        const name = document.createElement("td");
        name.textContent = row.method;
        tr.appendChild(name);
        for (const metric of metricNames) {
          const cell = document.createElement("td");
          cell.textContent = formatValue(row.metrics[metric]);
          tr.appendChild(cell);
        }
        const status = document.createElement("td");
        status.textContent = row.status;
        tr.appendChild(status);
        table.appendChild(tr);
      }

      rationale.textContent = `Recommended: ${results.recommended} — ${results.rationale}`;
    },
  };
}
