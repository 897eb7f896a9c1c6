/** Live slot checklist for the task being formulated.
 *
 * The server's progress report lists every fillable slot exactly once, split
 * into filled and missing; the panel keeps the order in which slots first
 * appeared so rows do not jump around as the checklist fills up.
 */

import type { PetelProgress } from "../types";

export interface PetelPanel {
  el: HTMLElement;
  update(progress: PetelProgress | null): void;
  slotCount(): number;
}

export function createPetelPanel(getSlotValue: (slot: string) => Promise<unknown>): PetelPanel {
  const el = document.createElement("section");
  el.className = "petel-panel";

  const title = document.createElement("h2");
  title.textContent = "Task checklist";

  const list = document.createElement("ul");
  list.className = "slot-list";

  const empty = document.createElement("p");
  empty.className = "slot-empty";
  empty.textContent = "Select an ML task to start formulating it.";

  el.append(title, empty, list);

  let slotOrder: string[] = [];

  function render(progress: PetelProgress): void {
    const known = new Set(slotOrder);
    for (const slot of [...progress.filled, ...progress.missing]) {
      if (!known.has(slot)) {
        slotOrder.push(slot);
        known.add(slot);
      }
    }
    const filled = new Set(progress.filled);
    list.replaceChildren();
    for (const slot of slotOrder) {
      const item = document.createElement("li");
      item.className = filled.has(slot) ? "slot slot-filled" : "slot slot-missing";
      item.dataset.slot = slot;

      const mark = document.createElement("span");
      mark.className = "slot-mark";
      mark.textContent = filled.has(slot) ? "✓" : "?";

      const name = document.createElement("span");
      name.className = "slot-name";
      name.textContent = slot;

      item.append(mark, name);
      if (filled.has(slot)) {
        const value = document.createElement("code");
        value.className = "slot-value";
        value.hidden = true;
        item.appendChild(value);
        item.addEventListener("click", () => {
          if (!value.hidden) {
            value.hidden = true;
            return;
          }
          void getSlotValue(slot).then((v) => {
            value.textContent = JSON.stringify(v);
            value.hidden = false;
          });
        });
      }
      list.appendChild(item);
    }
  }

  return {
    el,
    update(progress) {
      if (progress === null || progress.filled.length + progress.missing.length === 0) {
        slotOrder = [];
        list.replaceChildren();
        empty.hidden = false;
        return;
      }
      empty.hidden = true;
      render(progress);
    },
    slotCount() {
      return list.children.length;
    },
  };
}
